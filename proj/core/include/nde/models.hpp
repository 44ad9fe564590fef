#ifndef NDE_MODELS_HPP
#define NDE_MODELS_HPP

#include <map>
#include <span>
#include <string>

#include "nde/ivp.hpp"
#include "nde/profile.hpp"

// Every ODE reduction of the fifth-order dispersion models as a first-order
// system, with the sign(g)/sqrt(nu^2+g^2) regularization of the degenerate
// division, plus origin series and the quintic scaling symmetry.

namespace nde {

enum class ModelId {
    Nde50,            // g g5 = -(1/5) g' z
    Nde41,            // (g g4)'  = -(1/5) g' z
    Nde32,            // (g g3)'' = -(1/5) g' z
    Nde23,            // (g g2)''' = -(1/5) g' z
    Nde14,            // (g g')'''' = -(1/5) g' z
    UniformDiv,       // ((1+g^2) g')'''' = -(1/5) g' z
    UniformNondiv,    // (1+g^2) g5 = -(1/5) g' z
    BlowupAlpha,      // (f f')'''' = alpha f - beta f' y,  beta = (1+alpha)/5
    GlobalAlpha,      // (F F')'''' = beta F' y - alpha F
    T5Phase,          // g' = (A z + B z^3) / (g - z^5)
    CompactonQuintic, // F'''' = sqrt(F) - b F'' - c F   (F = f^2)
    CompactonSigned,  // F'''' = F - 2 sign(F) sqrt(|F|) (F = |f| f)
    LinearKernel      // F'''' = y F / 5
};

const char* to_string(ModelId id);
ModelId model_id_from_string(const std::string& s);

struct ModelSpec {
    ModelId id = ModelId::Nde50;
    double alpha = 0.0;   // alpha-family only; must lie in (0, 1/4) when used
    double c0 = 1.0;      // far-field amplitude of the alpha-family power law
    double A = 1.0;       // T5 constants, A = g'(0)^2 > 0
    double B = 0.0;       //               B = (2/3) g'(0) g'''(0)
    double nu = 1e-4;     // regularization; 0 means the raw degenerate division
    double pert_b = 0.0;  // quintic compacton family coefficients
    double pert_c = 0.0;
    bool rarefaction = false;  // flip the forcing sign: ... = +(1/5) g' z

    double beta() const { return (1.0 + alpha) / 5.0; }
    int order() const;
    bool is_alpha_family() const { return id == ModelId::BlowupAlpha || id == ModelId::GlobalAlpha; }
    bool has_quintic_scaling() const;  // g_a(z) = a^5 g(z/a) symmetry
    void validate() const;             // throws std::invalid_argument

    // flat key-value serialization (keys: model, alpha, c0, nu, A, B, pert_b, pert_c)
    std::map<std::string, std::string> to_kv() const;
    static ModelSpec from_kv(const std::map<std::string, std::string>& kv);
};

// First-order system right-hand side dy/dz at (z, y); y.size() == order().
void rhs(const ModelSpec& spec, double z, const State& y, State& dydz);
State rhs(const ModelSpec& spec, double z, const State& y);
RhsFn make_rhs(const ModelSpec& spec);

// Regularized reciprocal used by the degenerate models: sign(g)/sqrt(nu^2+g^2),
// with sign(0) = 0; falls back to 1/g when nu == 0.
double regularized_inverse(double g, double nu);

// Origin series g = C z + D z^3 - z^5/600 - D/(6300 C) z^7 for the Nde50
// reduction, returned as the state at z_eps. Rejects |z_eps| > 0.5.
State nde50_origin_series(double C, double D, double z_eps);

// Anti-symmetric origin series for the blow-up system: f'(0) = f1, f'''(0) = f3,
// even-order derivatives zero; terms through y^7.
State blowup_origin_series(const ModelSpec& spec, double f1, double f3, double y_eps);

// Series launch for the T5 phase-plane ODE: g = -sqrt(A) z - B/(4 sqrt(A)) z^3 + ...
State t5_origin_series(double A, double B, double z_eps);

// Dispatching form: (p1, p2) = (C, D), (f1, f3) or (A, B) depending on the model.
State series_init(const ModelSpec& spec, double p1, double p2, double z_eps);

// Scaling symmetry (valid for models with has_quintic_scaling()):
// returns a^5 g(z/a) with derivative columns scaled by a^{5-k}.
ProfileSolution rescale(const ModelSpec& spec, const ProfileSolution& p, double a);

// Pointwise equation residual given derivatives d[0..order] at z (the raw,
// unregularized equation with all terms on one side).
double equation_residual(const ModelSpec& spec, double z, std::span<const double> d);

// Sup-norm of the model equation over the grid interior, with the top
// derivative reconstructed from the highest stored column by 7-point
// finite differences. Requires at least 11 nodes.
double residual(const ModelSpec& spec, const ProfileSolution& p);

}  // namespace nde

#endif
