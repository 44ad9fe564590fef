#include "nde/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nde {

const char* to_string(Termination t) {
    switch (t) {
        case Termination::SpanEnd: return "SPAN_END";
        case Termination::Event: return "EVENT";
        case Termination::Blowup: return "BLOWUP";
        case Termination::StepUnderflow: return "STEP_UNDERFLOW";
    }
    return "?";
}

namespace {

// Dormand-Prince 5(4) tableau (FSAL)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// error = y5 - y4
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Stepper {
    const RhsFn& rhs;
    std::size_t n;
    std::array<State, 7> k;
    State ytmp;

    explicit Stepper(const RhsFn& f, std::size_t dim) : rhs(f), n(dim) {
        for (auto& ki : k) ki.assign(n, 0.0);
        ytmp.assign(n, 0.0);
    }

    // k[0] must hold f(t, y) on entry (FSAL). Fills ynew, err norm and k[6]=f(t+h, ynew).
    void step(double t, const State& y, double h, State& ynew, double& err,
              double rel_tol, double abs_tol) {
        auto stage = [&](double ci, std::initializer_list<std::pair<int, double>> arow) {
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (auto [j, a] : arow) s += a * k[static_cast<std::size_t>(j)][i];
                ytmp[i] = y[i] + h * s;
            }
            return t + ci * h;
        };
        double ts;
        ts = stage(c2, {{0, a21}});
        rhs(ts, ytmp, k[1]);
        ts = stage(c3, {{0, a31}, {1, a32}});
        rhs(ts, ytmp, k[2]);
        ts = stage(c4, {{0, a41}, {1, a42}, {2, a43}});
        rhs(ts, ytmp, k[3]);
        ts = stage(c5, {{0, a51}, {1, a52}, {2, a53}, {3, a54}});
        rhs(ts, ytmp, k[4]);
        ts = stage(1.0, {{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
        rhs(ts, ytmp, k[5]);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] +
                                  a75 * k[4][i] + a76 * k[5][i]);
        rhs(t + h, ynew, k[6]);

        err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double ei = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                             e6 * k[5][i] + e7 * k[6][i]);
            double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / static_cast<double>(n));
    }

    DenseStep make_dense(double t, double h, const State& y, const State& ynew) const {
        DenseStep ds;
        ds.t0 = t;
        ds.h = h;
        for (auto& r : ds.rcont) r.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double dy = ynew[i] - y[i];
            double bspl = h * k[0][i] - dy;
            ds.rcont[0][i] = y[i];
            ds.rcont[1][i] = dy;
            ds.rcont[2][i] = bspl;
            ds.rcont[3][i] = dy - h * k[6][i] - bspl;
            ds.rcont[4][i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] +
                                  d5 * k[4][i] + d6 * k[5][i] + d7 * k[6][i]);
        }
        return ds;
    }
};

bool any_blown(const State& y, double thresh) {
    for (double v : y)
        if (!std::isfinite(v) || std::abs(v) > thresh) return true;
    return false;
}

double initial_step(const RhsFn& rhs, double t0, const State& y0, double dir,
                    double rel_tol, double abs_tol, double max_step) {
    const std::size_t n = y0.size();
    State f0(n), y1(n), f1(n);
    rhs(t0, y0, f0);
    double dn = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double sc = abs_tol + rel_tol * std::abs(y0[i]);
        dn += (y0[i] / sc) * (y0[i] / sc);
        fn += (f0[i] / sc) * (f0[i] / sc);
    }
    double h0 = (dn < 1e-10 || fn < 1e-10) ? 1e-6 : 0.01 * std::sqrt(dn / fn);
    h0 = std::min(h0, max_step);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + dir * h0 * f0[i];
    rhs(t0 + dir * h0, y1, f1);
    double d2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double sc = abs_tol + rel_tol * std::abs(y0[i]);
        double df = (f1[i] - f0[i]) / sc;
        d2 += df * df;
    }
    d2 = std::sqrt(d2) / h0;
    double h1 = (std::max(std::sqrt(fn), d2) <= 1e-15)
                    ? std::max(1e-6, h0 * 1e-3)
                    : std::pow(0.01 / std::max(std::sqrt(fn), d2), 0.2);
    return std::min({100 * h0, h1, max_step});
}

}  // namespace

void DenseStep::eval(double t, State& out) const {
    double th = (t - t0) / h;
    double th1 = 1.0 - th;
    out.resize(rcont[0].size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = rcont[0][i] +
                 th * (rcont[1][i] + th1 * (rcont[2][i] + th * (rcont[3][i] + th1 * rcont[4][i])));
}

void Trajectory::eval(double t, State& out) const {
    if (dense.empty()) {
        out = states.front();
        return;
    }
    bool fwd = forward();
    double lo = fwd ? nodes.front() : nodes.back();
    double hi = fwd ? nodes.back() : nodes.front();
    t = std::clamp(t, lo, hi);
    // binary search for the step containing t
    std::size_t a = 0, b = dense.size() - 1;
    while (a < b) {
        std::size_t m = (a + b) / 2;
        double tend = nodes[m + 1];
        if (fwd ? (t <= tend) : (t >= tend))
            b = m;
        else
            a = m + 1;
    }
    dense[a].eval(t, out);
}

double Trajectory::eval(double t, std::size_t component) const {
    State tmp;
    eval(t, tmp);
    return tmp[component];
}

namespace {

struct Core {
    Trajectory traj;
    Stepper st;
    double dir, rel, at, hmax;
    const IntegrationOptions& opts;

    Core(const RhsFn& rhs, const State& y0, double t0, double t1,
         const IntegrationOptions& o)
        : st(rhs, y0.size()), opts(o) {
        if (!(t1 != t0)) throw std::invalid_argument("integrate: degenerate span");
        if (!(o.rel_tol > 0) || !(o.abs_tol > 0))
            throw std::invalid_argument("integrate: tolerances must be positive");
        dir = t1 > t0 ? 1.0 : -1.0;
        rel = o.rel_tol;
        at = o.abs_tol;
        hmax = std::min(o.max_step, std::abs(t1 - t0));
        traj.nodes.push_back(t0);
        traj.states.push_back(y0);
        rhs(t0, y0, st.k[0]);
    }

    // runs one accepted step at a time; cb(told, tnew) is called after each
    // accepted step and may return false to stop (event handling trims later).
    template <typename Cb>
    void run(const RhsFn& /*rhs*/, double t1, Cb&& cb) {
        double t = traj.nodes.back();
        State y = traj.states.back();
        if (any_blown(y, opts.blowup_threshold)) {
            traj.termination = Termination::Blowup;
            return;
        }
        double h = initial_step([&](double tt, const State& yy, State& ff) { st.rhs(tt, yy, ff); },
                                t, y, dir, rel, at, hmax);
        double facold = 1e-4;
        const double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
        State ynew(y.size());
        std::size_t steps = 0;
        const double span0 = traj.nodes.front();
        while (true) {
            if ((t - t1) * dir >= 0) {
                traj.termination = Termination::SpanEnd;
                return;
            }
            if (std::abs(t - span0) > opts.max_span) {
                traj.termination = Termination::SpanEnd;
                return;
            }
            if (++steps > opts.max_steps) {
                traj.termination = Termination::StepUnderflow;
                return;
            }
            h = std::min(h, std::abs(t1 - t));
            double hfloor = 16.0 * std::numeric_limits<double>::epsilon() *
                            std::max(1.0, std::abs(t));
            if (h < hfloor) {
                traj.termination = Termination::StepUnderflow;
                return;
            }
            double err;
            st.step(t, y, dir * h, ynew, err, rel, at);
            if (!std::isfinite(err)) err = 1e10;
            if (err <= 1.0) {
                // accept
                double fac11 = std::pow(std::max(err, 1e-32), expo1);
                double fac = fac11 / std::pow(facold, beta);
                fac = std::max(1.0 / 10.0, std::min(1.0 / 0.2, fac / safe));
                facold = std::max(err, 1e-4);
                traj.dense.push_back(st.make_dense(t, dir * h, y, ynew));
                t += dir * h;
                y = ynew;
                traj.nodes.push_back(t);
                traj.states.push_back(y);
                traj.n_steps++;
                std::swap(st.k[0], st.k[6]);  // FSAL
                if (any_blown(y, opts.blowup_threshold)) {
                    traj.termination = Termination::Blowup;
                    return;
                }
                if (!cb(traj.nodes[traj.nodes.size() - 2], t)) {
                    traj.termination = Termination::Event;
                    return;
                }
                h = std::min(h / fac, hmax);
            } else {
                h = h / std::min(1.0 / 0.2, std::pow(std::max(err, 1e-32), expo1) / safe);
                traj.n_rejected++;
            }
        }
    }
};

}  // namespace

Trajectory integrate(const RhsFn& rhs, const State& y0, double t0, double t1,
                     const IntegrationOptions& opts) {
    Core core(rhs, y0, t0, t1, opts);
    core.run(rhs, t1, [](double, double) { return true; });
    return std::move(core.traj);
}

EventedResult integrate_with_events(const RhsFn& rhs, const State& y0, double t0,
                                    double t1, const IntegrationOptions& opts,
                                    const std::vector<Event>& events) {
    EventedResult res;
    Core core(rhs, y0, t0, t1, opts);
    std::vector<double> gprev(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) gprev[i] = events[i].fn(t0, y0);

    const double span = std::abs(t1 - t0);
    State ytmp;
    bool stopped_by_terminal = false;

    core.run(rhs, t1, [&](double ta, double tb) {
        const DenseStep& ds = core.traj.dense.back();
        const double dir = tb > ta ? 1.0 : -1.0;
        std::vector<EventHit> step_hits;
        for (std::size_t i = 0; i < events.size(); ++i) {
            double ga = gprev[i];
            double gb = events[i].fn(tb, core.traj.states.back());
            if (ga != 0.0 && (gb == 0.0 || ga * gb < 0.0)) {
                // bisect on dense output; tolerance: 1e-12 of the step width,
                // never coarser than rel_tol * span
                double lo = ta, hi = tb;
                double tol = std::max(1e-12 * std::abs(tb - ta),
                                      std::min(opts.rel_tol * span, std::abs(tb - ta)));
                double glo = ga;
                while (std::abs(hi - lo) > tol) {
                    double mid = 0.5 * (lo + hi);
                    ds.eval(mid, ytmp);
                    double gm = events[i].fn(mid, ytmp);
                    if (gm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if (glo * gm < 0.0)
                        hi = mid;
                    else {
                        lo = mid;
                        glo = gm;
                    }
                }
                EventHit hit;
                hit.index = i;
                hit.t = 0.5 * (lo + hi);
                ds.eval(hit.t, hit.y);
                step_hits.push_back(std::move(hit));
            }
            gprev[i] = gb;
        }
        std::sort(step_hits.begin(), step_hits.end(),
                  [dir](const EventHit& a, const EventHit& b) { return dir * a.t < dir * b.t; });
        for (auto& hit : step_hits) {
            bool terminal = events[hit.index].terminal;
            res.hits.push_back(hit);
            if (terminal) {
                core.traj.nodes.back() = hit.t;
                core.traj.states.back() = hit.y;
                stopped_by_terminal = true;
                return false;
            }
        }
        return true;
    });

    res.trajectory = std::move(core.traj);
    if (stopped_by_terminal) res.trajectory.termination = Termination::Event;
    return res;
}

}  // namespace nde
