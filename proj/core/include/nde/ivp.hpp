#ifndef NDE_IVP_HPP
#define NDE_IVP_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

// Adaptive Dormand-Prince 5(4) integrator with continuous (dense) output and
// event location. All state is local to a call; concurrent use is safe.

namespace nde {

using State = std::vector<double>;

// rhs(t, y, dydt); dydt is pre-sized to y.size()
using RhsFn = std::function<void(double, const State&, State&)>;

// scalar event function of (t, y); a root is reported where it changes sign
using EventFn = std::function<double(double, const State&)>;

struct Event {
    EventFn fn;
    bool terminal = false;
};

struct EventHit {
    std::size_t index = 0;  // which event
    double t = 0.0;
    State y;
};

struct IntegrationOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    double blowup_threshold = 1e8;   // abort when any |y_i| exceeds this
    double max_span = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 10'000'000;
};

enum class Termination { SpanEnd, Event, Blowup, StepUnderflow };

const char* to_string(Termination t);

// One accepted step plus the interpolation coefficients for it.
struct DenseStep {
    double t0 = 0.0, h = 0.0;
    // rcont[0..4]: coefficients of the quartic continuous extension
    std::array<State, 5> rcont;
    void eval(double t, State& out) const;
};

struct Trajectory {
    std::vector<double> nodes;       // strictly monotone (either direction)
    std::vector<State> states;       // one per node
    std::vector<DenseStep> dense;    // one per step (nodes.size()-1)
    Termination termination = Termination::SpanEnd;
    std::size_t n_steps = 0, n_rejected = 0;

    bool forward() const { return nodes.size() < 2 || nodes.back() >= nodes.front(); }
    double t_begin() const { return nodes.front(); }
    double t_end() const { return nodes.back(); }
    const State& y_end() const { return states.back(); }

    // dense evaluation; t clamped to the covered span
    void eval(double t, State& out) const;
    double eval(double t, std::size_t component) const;
};

Trajectory integrate(const RhsFn& rhs, const State& y0, double t0, double t1,
                     const IntegrationOptions& opts = {});

struct EventedResult {
    Trajectory trajectory;
    std::vector<EventHit> hits;
};

// Integrates and locates sign changes of each event function by bisection on
// the dense output. A terminal event stops integration at the located root.
EventedResult integrate_with_events(const RhsFn& rhs, const State& y0, double t0,
                                    double t1, const IntegrationOptions& opts,
                                    const std::vector<Event>& events);

}  // namespace nde

#endif
