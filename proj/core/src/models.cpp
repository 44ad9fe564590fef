#include "nde/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nde/numerics.hpp"

namespace nde {

const char* to_string(ModelId id) {
    switch (id) {
        case ModelId::Nde50: return "nde50";
        case ModelId::Nde41: return "nde41";
        case ModelId::Nde32: return "nde32";
        case ModelId::Nde23: return "nde23";
        case ModelId::Nde14: return "nde14";
        case ModelId::UniformDiv: return "uniform-div";
        case ModelId::UniformNondiv: return "uniform-nondiv";
        case ModelId::BlowupAlpha: return "blowup-alpha";
        case ModelId::GlobalAlpha: return "global-alpha";
        case ModelId::T5Phase: return "t5-phase";
        case ModelId::CompactonQuintic: return "compacton-quintic";
        case ModelId::CompactonSigned: return "compacton-signed";
        case ModelId::LinearKernel: return "linear-kernel";
    }
    return "?";
}

ModelId model_id_from_string(const std::string& s) {
    for (ModelId id : {ModelId::Nde50, ModelId::Nde41, ModelId::Nde32, ModelId::Nde23,
                       ModelId::Nde14, ModelId::UniformDiv, ModelId::UniformNondiv,
                       ModelId::BlowupAlpha, ModelId::GlobalAlpha, ModelId::T5Phase,
                       ModelId::CompactonQuintic, ModelId::CompactonSigned,
                       ModelId::LinearKernel})
        if (s == to_string(id)) return id;
    throw std::invalid_argument("unknown model id: " + s);
}

int ModelSpec::order() const {
    switch (id) {
        case ModelId::T5Phase: return 1;
        case ModelId::CompactonQuintic:
        case ModelId::CompactonSigned:
        case ModelId::LinearKernel: return 4;
        default: return 5;
    }
}

bool ModelSpec::has_quintic_scaling() const {
    switch (id) {
        case ModelId::Nde50:
        case ModelId::Nde41:
        case ModelId::Nde32:
        case ModelId::Nde23:
        case ModelId::Nde14:
        case ModelId::BlowupAlpha:
        case ModelId::GlobalAlpha: return true;
        default: return false;
    }
}

void ModelSpec::validate() const {
    if (nu < 0) throw std::invalid_argument("nu must be >= 0");
    if (is_alpha_family()) {
        if (!(alpha > 0.0 && alpha < 0.25))
            throw std::invalid_argument("alpha must lie in (0, 1/4)");
        if (!(c0 > 0.0)) throw std::invalid_argument("c0 must be positive");
    }
    if (id == ModelId::T5Phase && !(A > 0.0))
        throw std::invalid_argument("T5 model needs A > 0");
    if (rarefaction && (is_alpha_family() || order() != 5))
        throw std::invalid_argument("rarefaction form only defined for the fifth-order reductions");
}

std::map<std::string, std::string> ModelSpec::to_kv() const {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::map<std::string, std::string> kv;
    kv["model"] = to_string(id);
    kv["alpha"] = num(alpha);
    kv["c0"] = num(c0);
    kv["nu"] = num(nu);
    kv["A"] = num(A);
    kv["B"] = num(B);
    kv["pert_b"] = num(pert_b);
    kv["pert_c"] = num(pert_c);
    return kv;
}

ModelSpec ModelSpec::from_kv(const std::map<std::string, std::string>& kv) {
    ModelSpec s;
    auto get = [&](const char* k, double& dst) {
        auto it = kv.find(k);
        if (it != kv.end()) dst = std::stod(it->second);
    };
    if (auto it = kv.find("model"); it != kv.end()) s.id = model_id_from_string(it->second);
    get("alpha", s.alpha);
    get("c0", s.c0);
    get("nu", s.nu);
    get("A", s.A);
    get("B", s.B);
    get("pert_b", s.pert_b);
    get("pert_c", s.pert_c);
    return s;
}

double regularized_inverse(double g, double nu) {
    if (nu > 0.0) {
        double sg = (g > 0.0) - (g < 0.0);
        return sg / std::sqrt(nu * nu + g * g);
    }
    if (g == 0.0) throw std::domain_error("division by zero in degenerate model (nu = 0)");
    return 1.0 / g;
}

void rhs(const ModelSpec& spec, double z, const State& y, State& dydz) {
    const int n = spec.order();
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("state size does not match model order");
    dydz.resize(y.size());
    const double force_sign = spec.rarefaction ? 1.0 : -1.0;

    switch (spec.id) {
        case ModelId::T5Phase: {
            dydz[0] = (spec.A * z + spec.B * z * z * z) / (y[0] - std::pow(z, 5));
            return;
        }
        case ModelId::CompactonQuintic: {
            const double F = y[0];
            if (F < 0.0) throw std::domain_error("compacton-quintic rhs needs F >= 0");
            dydz[0] = y[1];
            dydz[1] = y[2];
            dydz[2] = y[3];
            dydz[3] = std::sqrt(F) - spec.pert_b * y[2] - spec.pert_c * y[0];
            return;
        }
        case ModelId::CompactonSigned: {
            const double F = y[0];
            const double sg = (F > 0.0) - (F < 0.0);
            dydz[0] = y[1];
            dydz[1] = y[2];
            dydz[2] = y[3];
            dydz[3] = F - 2.0 * sg * std::sqrt(std::abs(F));
            return;
        }
        case ModelId::LinearKernel: {
            dydz[0] = y[1];
            dydz[1] = y[2];
            dydz[2] = y[3];
            dydz[3] = z * y[0] / 5.0;
            return;
        }
        default: break;
    }

    const double g = y[0], g1 = y[1], g2 = y[2], g3 = y[3], g4 = y[4];
    dydz[0] = g1;
    dydz[1] = g2;
    dydz[2] = g3;
    dydz[3] = g4;
    const double force = force_sign * 0.2 * g1 * z;

    switch (spec.id) {
        case ModelId::Nde50:
            dydz[4] = force * regularized_inverse(g, spec.nu);
            break;
        case ModelId::Nde41:
            dydz[4] = (force - g1 * g4) * regularized_inverse(g, spec.nu);
            break;
        case ModelId::Nde32:
            dydz[4] = (force - g2 * g3 - 2.0 * g1 * g4) * regularized_inverse(g, spec.nu);
            break;
        case ModelId::Nde23:
            dydz[4] = (force - 4.0 * g2 * g3 - 3.0 * g1 * g4) * regularized_inverse(g, spec.nu);
            break;
        case ModelId::Nde14:
            dydz[4] = (force - 10.0 * g2 * g3 - 5.0 * g1 * g4) * regularized_inverse(g, spec.nu);
            break;
        case ModelId::UniformDiv:
            // ((1+g^2) g')'''' expanded by Leibniz; no degeneracy
            dydz[4] = (force - 10.0 * g * g1 * g4 - 20.0 * g1 * g1 * g3 -
                       20.0 * g * g2 * g3 - 30.0 * g1 * g2 * g2) /
                      (1.0 + g * g);
            break;
        case ModelId::UniformNondiv:
            dydz[4] = force / (1.0 + g * g);
            break;
        case ModelId::BlowupAlpha: {
            const double num =
                spec.alpha * g - spec.beta() * g1 * z - 5.0 * g1 * g4 - 10.0 * g2 * g3;
            dydz[4] = num * regularized_inverse(g, spec.nu);
            break;
        }
        case ModelId::GlobalAlpha: {
            const double num =
                spec.beta() * g1 * z - spec.alpha * g - 5.0 * g1 * g4 - 10.0 * g2 * g3;
            dydz[4] = num * regularized_inverse(g, spec.nu);
            break;
        }
        default:
            throw std::logic_error("unhandled model in rhs");
    }
}

State rhs(const ModelSpec& spec, double z, const State& y) {
    State out;
    rhs(spec, z, y, out);
    return out;
}

RhsFn make_rhs(const ModelSpec& spec) {
    return [spec](double z, const State& y, State& dydz) { rhs(spec, z, y, dydz); };
}

State nde50_origin_series(double C, double D, double z_eps) {
    if (C == 0.0) throw std::invalid_argument("origin series needs C != 0");
    if (std::abs(z_eps) > 0.5)
        throw std::invalid_argument("origin series evaluated outside its validity radius 0.5");
    // g = C z + D z^3 + F z^5 + E z^7 with F = -1/600 and E fixed by the z^3
    // balance of g g^(5) = -(1/5) g' z:  2520 C E = -(2/5) D.
    const double F = -1.0 / 600.0;
    const double E = -D / (6300.0 * C);
    const double z = z_eps, z2 = z * z, z3 = z2 * z, z4 = z2 * z2, z5 = z4 * z, z6 = z4 * z2,
                 z7 = z6 * z;
    return {C * z + D * z3 + F * z5 + E * z7,
            C + 3.0 * D * z2 + 5.0 * F * z4 + 7.0 * E * z6,
            6.0 * D * z + 20.0 * F * z3 + 42.0 * E * z5,
            6.0 * D + 60.0 * F * z2 + 210.0 * E * z4,
            120.0 * F * z + 840.0 * E * z3};
}

State blowup_origin_series(const ModelSpec& spec, double f1, double f3, double y_eps) {
    if (std::abs(y_eps) > 0.5)
        throw std::invalid_argument("origin series evaluated outside its validity radius 0.5");
    if (f1 == 0.0) throw std::invalid_argument("blow-up series needs f'(0) != 0");
    const double a = spec.alpha, b = spec.beta();
    const double a1 = f1, a3 = f3 / 6.0;
    // odd series f = a1 y + a3 y^3 + a5 y^5 + a7 y^7 for (f f')'''' = alpha f - beta f' y
    const double a5 = ((a - b) * a1 - 360.0 * a3 * a3) / (720.0 * a1);
    const double a7 = ((a - 3.0 * b) * a3 / 6720.0 - a3 * a5) / a1;
    const double y = y_eps, y2 = y * y, y3 = y2 * y, y4 = y2 * y2, y5 = y4 * y, y6 = y4 * y2,
                 y7 = y6 * y;
    return {a1 * y + a3 * y3 + a5 * y5 + a7 * y7,
            a1 + 3.0 * a3 * y2 + 5.0 * a5 * y4 + 7.0 * a7 * y6,
            6.0 * a3 * y + 20.0 * a5 * y3 + 42.0 * a7 * y5,
            6.0 * a3 + 60.0 * a5 * y2 + 210.0 * a7 * y4,
            120.0 * a5 * y + 840.0 * a7 * y3};
}

State t5_origin_series(double A, double B, double z_eps) {
    if (!(A > 0.0)) throw std::invalid_argument("t5 series needs A > 0");
    if (std::abs(z_eps) > 0.5)
        throw std::invalid_argument("origin series evaluated outside its validity radius 0.5");
    const double g1 = -std::sqrt(A);
    const double g3 = B / (4.0 * g1);
    const double g5 = (g3 * g3 / g1 + 1.0 - B * g3 / (g1 * g1)) / 6.0;
    const double z = z_eps;
    return {g1 * z + g3 * z * z * z + g5 * std::pow(z, 5)};
}

State series_init(const ModelSpec& spec, double p1, double p2, double z_eps) {
    switch (spec.id) {
        case ModelId::Nde50: return nde50_origin_series(p1, p2, z_eps);
        case ModelId::BlowupAlpha: return blowup_origin_series(spec, p1, p2, z_eps);
        case ModelId::T5Phase: return t5_origin_series(p1, p2, z_eps);
        default:
            throw std::invalid_argument("no origin series for this model");
    }
}

ProfileSolution rescale(const ModelSpec& spec, const ProfileSolution& p, double a) {
    if (a == 0.0) throw std::invalid_argument("rescale: a must be nonzero");
    if (!spec.has_quintic_scaling())
        throw std::invalid_argument("rescale: model lacks the quintic scaling symmetry");
    ProfileSolution q;
    q.shoot_params = p.shoot_params;
    q.fate = p.fate;
    q.note = p.note;
    const std::size_t n = p.size();
    q.grid.resize(n);
    q.cols.assign(p.n_cols(), std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) q.grid[i] = a * p.grid[i];
    for (std::size_t k = 0; k < p.n_cols(); ++k) {
        const double s = std::pow(a, 5.0 - static_cast<double>(k));
        for (std::size_t i = 0; i < n; ++i) q.cols[k][i] = s * p.cols[k][i];
    }
    if (a < 0.0) {  // keep the grid increasing
        std::reverse(q.grid.begin(), q.grid.end());
        for (auto& c : q.cols) std::reverse(c.begin(), c.end());
    }
    return q;
}

double equation_residual(const ModelSpec& spec, double z, std::span<const double> d) {
    const double fs = spec.rarefaction ? -1.0 : 1.0;
    switch (spec.id) {
        case ModelId::Nde50:
            return d[0] * d[5] + fs * 0.2 * d[1] * z;
        case ModelId::Nde41:
            return d[0] * d[5] + d[1] * d[4] + fs * 0.2 * d[1] * z;
        case ModelId::Nde32:
            return d[0] * d[5] + 2.0 * d[1] * d[4] + d[2] * d[3] + fs * 0.2 * d[1] * z;
        case ModelId::Nde23:
            return d[0] * d[5] + 3.0 * d[1] * d[4] + 4.0 * d[2] * d[3] + fs * 0.2 * d[1] * z;
        case ModelId::Nde14:
            return d[0] * d[5] + 5.0 * d[1] * d[4] + 10.0 * d[2] * d[3] + fs * 0.2 * d[1] * z;
        case ModelId::UniformDiv:
            return (1.0 + d[0] * d[0]) * d[5] + 10.0 * d[0] * d[1] * d[4] +
                   20.0 * d[1] * d[1] * d[3] + 20.0 * d[0] * d[2] * d[3] +
                   30.0 * d[1] * d[2] * d[2] + fs * 0.2 * d[1] * z;
        case ModelId::UniformNondiv:
            return (1.0 + d[0] * d[0]) * d[5] + fs * 0.2 * d[1] * z;
        case ModelId::BlowupAlpha:
            return d[0] * d[5] + 5.0 * d[1] * d[4] + 10.0 * d[2] * d[3] +
                   spec.beta() * d[1] * z - spec.alpha * d[0];
        case ModelId::GlobalAlpha:
            return d[0] * d[5] + 5.0 * d[1] * d[4] + 10.0 * d[2] * d[3] -
                   spec.beta() * d[1] * z + spec.alpha * d[0];
        case ModelId::T5Phase:
            return d[1] * (d[0] - std::pow(z, 5)) - (spec.A * z + spec.B * z * z * z);
        case ModelId::CompactonQuintic:
            return d[4] - std::sqrt(std::max(d[0], 0.0)) + spec.pert_b * d[2] +
                   spec.pert_c * d[0];
        case ModelId::CompactonSigned: {
            const double sg = (d[0] > 0.0) - (d[0] < 0.0);
            return d[4] - d[0] + 2.0 * sg * std::sqrt(std::abs(d[0]));
        }
        case ModelId::LinearKernel:
            return d[4] - z * d[0] / 5.0;
    }
    return 0.0;
}

double residual(const ModelSpec& spec, const ProfileSolution& p) {
    const std::size_t n = p.size();
    if (n < 11) throw std::invalid_argument("residual: grid too coarse (need >= 11 nodes)");
    const int order = spec.order();
    const std::size_t top = static_cast<std::size_t>(order) - 1;  // highest stored column
    if (p.n_cols() < top + 1)
        throw std::invalid_argument("residual: profile lacks the required derivative columns");

    const int w = 3;  // 7-point stencil
    double sup = 0.0;
    std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
    for (std::size_t i = w; i + w < n; ++i) {
        for (int k = 0; k <= order - 1; ++k) d[static_cast<std::size_t>(k)] = p.cols[static_cast<std::size_t>(k)][i];
        auto xs = std::span<const double>(p.grid).subspan(i - w, 2 * w + 1);
        auto ws = fd_weights(xs, p.grid[i], 1);
        double topval = 0.0;
        for (std::size_t j = 0; j < ws.size(); ++j) topval += ws[j] * p.cols[top][i - w + j];
        d[static_cast<std::size_t>(order)] = topval;
        sup = std::max(sup, std::abs(equation_residual(spec, p.grid[i], d)));
    }
    return sup;
}

}  // namespace nde
