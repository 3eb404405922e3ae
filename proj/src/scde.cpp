#include "braidlab/scde.hpp"

#include <algorithm>
#include <cmath>

#include "braidlab/errors.hpp"
#include "braidlab/quad.hpp"

namespace braidlab {

namespace {
constexpr double kZero = 1e-9;
constexpr double kStall = 1e-12;
constexpr double kEpsMax = 4.0;

// out[i] = sum_{j=i}^{i+w-1} a[j], indices beyond a contribute zero
void window_fwd(const std::vector<double>& a, int w, std::vector<double>& out) {
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < static_cast<int>(out.size()); ++i) {
        double s = 0.0;
        const int hi = std::min(n, i + w);
        for (int j = std::min(i, n); j < hi; ++j) s += a[j];
        out[i] = s;
    }
}

// out[i] = sum_{j=i-w+1}^{i} a[j]
void window_bwd(const std::vector<double>& a, int w, std::vector<double>& out) {
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < static_cast<int>(out.size()); ++i) {
        double s = 0.0;
        const int lo = std::max(0, i - w + 1);
        const int hi = std::min(n, i + 1);
        for (int j = lo; j < hi; ++j) s += a[j];
        out[i] = s;
    }
}

struct StepBuffers {
    std::vector<double> t, u, v, s;
};

// the eps-free update xi_i; buffers sized (M, N, M, N)
void coupled_xi(const CoupledParams& p, const std::vector<double>& x, StepBuffers& b,
                std::vector<double>& xi) {
    const int N = p.N, w = p.w, M = p.M();
    const int km1 = p.k - 1;
    b.t.resize(M);
    for (int q = 0; q < M; ++q) b.t[q] = -std::expm1(-p.gamma * x[q]);
    b.u.resize(N);
    window_fwd(b.t, w, b.u);
    for (int q = 0; q < N; ++q) b.u[q] = std::pow(b.u[q] / w, km1);
    b.v.resize(M);
    window_bwd(b.u, w, b.v);
    for (int h = 0; h < M; ++h) b.v[h] = -std::expm1(-p.gamma * (b.v[h] / w));
    b.s.resize(N);
    window_fwd(b.v, w, b.s);
    for (int gg = 0; gg < N; ++gg) b.s[gg] = std::pow(b.s[gg] / w, km1);
    xi.resize(M);
    window_bwd(b.s, w, xi);
    for (int i = 0; i < M; ++i) xi[i] /= w;
}

}  // namespace

void CoupledParams::validate() const {
    if (k < 2) throw param_error("k must be >= 2");
    if (!(gamma > 0.0)) throw param_error("gamma must be positive");
    if (eps < 0.0 || eps > kEpsMax) throw param_error("eps out of [0, 4]");
    if (N < 1) throw param_error("N must be >= 1");
    if (w < 1 || w > N + 1) throw param_error("w must satisfy 1 <= w <= N+1");
}

CoupledState CoupledState::initial(const CoupledParams& p) {
    p.validate();
    CoupledState s;
    s.params = p;
    s.x.assign(static_cast<std::size_t>(p.M()), 0.0);
    std::fill(s.x.begin(), s.x.begin() + p.N, 1.0);
    return s;
}

double coupling_entry(int p, int q, int w) {
    const int d = q - p + 1;
    return (d >= 1 && d <= w) ? 1.0 / w : 0.0;
}

CoupledState coupled_de_step(const CoupledState& s) {
    s.params.validate();
    if (static_cast<int>(s.x.size()) != s.params.M()) throw param_error("state size != M");
    CoupledState out;
    out.params = s.params;
    StepBuffers b;
    coupled_xi(s.params, s.x, b, out.x);
    for (double& v : out.x) v *= s.params.eps;
    return out;
}

CoupledFpResult coupled_fixed_point(const CoupledParams& p, double tol, long max_iter) {
    CoupledState st = CoupledState::initial(p);
    StepBuffers b;
    std::vector<double> xi;
    CoupledFpResult r;
    for (long it = 0; it < max_iter; ++it) {
        coupled_xi(p, st.x, b, xi);
        double mx = 0.0, diff = 0.0;
        for (int i = 0; i < p.M(); ++i) {
            const double xn = p.eps * xi[i];
            diff = std::max(diff, std::fabs(xn - st.x[i]));
            st.x[i] = xn;
            mx = std::max(mx, xn);
        }
        r.iterations = it + 1;
        if (mx < kZero) {
            r.died = true;
            std::fill(st.x.begin(), st.x.end(), 0.0);
            break;
        }
        if (diff < tol) break;
    }
    r.x = std::move(st.x);
    return r;
}

namespace {

bool coupled_dies(const CoupledParams& p, long max_iter = 100'000) {
    return coupled_fixed_point(p, kStall, max_iter).died;
}

}  // namespace

double eps_bp_coupled(int k, double gamma, int N, int w, double tol) {
    CoupledParams base{k, gamma, 0.0, N, w};
    base.validate();
    if (!(tol > 0.0)) throw param_error("tol must be positive");
    auto dies = [&](double e) { return coupled_dies(CoupledParams{k, gamma, e, N, w}); };
    if (dies(kEpsMax)) throw bracket_error("eps_bp_coupled: still dies at eps=4");
    return bisect(dies, 0.0, kEpsMax, tol);
}

double beta_bp_coupled_raw(int k, double eps, int N, int w, double tol) {
    CoupledParams base{k, 1.0, eps, N, w};
    base.validate();
    if (!(tol > 0.0)) throw param_error("tol must be positive");
    const double lo = 0.02, hi = kEpsMax;
    auto survives = [&](double beta) { return !coupled_dies(CoupledParams{k, k / beta, eps, N, w}); };
    if (!survives(lo)) throw bracket_error("beta_bp_coupled: already dies at beta=0.02");
    if (survives(hi)) throw bracket_error("beta_bp_coupled: survives at beta=4");
    return bisect(survives, lo, hi, tol);
}

double beta_bp_coupled(int k, double eps, int N, int w, double tol) {
    const double raw = beta_bp_coupled_raw(k, eps, N, w, tol);
    return beta_c(k, k / raw, N, w);
}

double design_rate(int k, double gamma, int N, int w, int depth) {
    if (w > N + 1) throw param_error("design_rate requires w <= N+1");
    if (depth < 1) throw param_error("depth must be >= 1");
    return depth * beta_c(k, gamma, N, w);
}

double beta_c(int k, double gamma, int N, int w) {
    if (k < 2 || !(gamma > 0.0) || N < 1 || w < 1 || w > N + 1) throw param_error("beta_c: bad parameters");
    // Poisson-average of the per-degree surviving-counter bracket
    double total = 0.0;
    double term = std::exp(-gamma);  // e^-gamma * gamma^i / i!
    for (long i = 0;; ++i) {
        const long ip = (i > 0) ? i : 1;
        double boundary = 0.0;
        for (int j = 1; j < w; ++j) boundary += 1.0 - std::pow(static_cast<double>(j) / w, static_cast<double>(ip));
        total += term * (N - w + 1 + 2.0 * boundary);
        term *= gamma / static_cast<double>(i + 1);
        if (term < 1e-14 && i + 1 > gamma) break;
        if (i > 10'000'000) break;
    }
    return k * total / (gamma * N);
}

double gamma_for_beta_c(int k, double beta_target, int N, int w, double tol) {
    if (!(beta_target > 0.0)) throw param_error("beta target must be positive");
    double lo = k / 4.0, hi = k / 1e-3;
    if (beta_c(k, lo, N, w) < beta_target) lo = k / kEpsMax;
    if (beta_c(k, lo, N, w) < beta_target) throw bracket_error("gamma_for_beta_c: target beta too large");
    auto above = [&](double gam) { return beta_c(k, gam, N, w) > beta_target; };
    return bisect(above, lo, hi, tol * k);
}

CoupledEbpPoint coupled_ebp_point(const CoupledParams& p, const std::vector<double>& x, int i) {
    p.validate();
    if (static_cast<int>(x.size()) != p.M()) throw param_error("state size != M");
    if (i < 1 || i > p.N) throw param_error("position must carry flow nodes (1 <= i <= N)");
    StepBuffers b;
    std::vector<double> xi;
    coupled_xi(p, x, b, xi);
    const int idx = i - 1;
    CoupledEbpPoint out;
    double vsum = 0.0;
    const int hi = std::min(p.M(), idx + p.w);
    for (int h = idx; h < hi; ++h) vsum += b.v[h];
    out.h = std::pow(vsum / p.w, p.k);
    if (x[idx] == 0.0) {
        out.eps = 0.0;
        return out;
    }
    if (xi[idx] == 0.0) throw numeric_error("coupled_ebp_point: singular point (xi = 0 with x > 0)");
    out.eps = x[idx] / xi[idx];
    return out;
}

std::vector<CoupledEbpSample> coupled_ebp_curve(int k, double gamma, int N, int w, int i,
                                                const std::vector<double>& t_grid, long max_iter,
                                                double tol) {
    CoupledParams p{k, gamma, 0.0, N, w};
    p.validate();
    if (i < 1 || i > N) throw param_error("position must carry flow nodes");
    const int idx = i - 1;
    std::vector<CoupledEbpSample> out;
    out.reserve(t_grid.size());
    std::vector<double> x(static_cast<std::size_t>(p.M()), t_grid.empty() ? 0.0 : t_grid.front());
    StepBuffers b;
    std::vector<double> xi;
    for (double t : t_grid) {
        if (!(t > 0.0) || t > 1.0) throw param_error("anchor grid must lie in (0, 1]");
        for (double& v : x) v = std::clamp(v, 0.0, 1.0);
        x[idx] = t;
        CoupledEbpSample sample;
        sample.t = t;
        double eps_t = 0.0;
        for (long it = 0; it < max_iter; ++it) {
            coupled_xi(p, x, b, xi);
            if (xi[idx] <= 0.0) break;
            eps_t = t / xi[idx];
            double diff = 0.0;
            for (int q = 0; q < p.M(); ++q) {
                const double xn = std::min(1.0, eps_t * xi[q]);
                diff = std::max(diff, std::fabs(xn - x[q]));
                x[q] = xn;
            }
            x[idx] = t;  // anchor
            if (diff < tol) {
                sample.converged = true;
                break;
            }
        }
        CoupledParams pe = p;
        pe.eps = std::min(eps_t, kEpsMax);
        const auto pt = coupled_ebp_point(pe, x, i);
        sample.eps = eps_t;
        sample.h = pt.h;
        out.push_back(sample);
    }
    return out;
}

namespace {

// two-phase variant: counter update averages x on odd rounds, flow update
// averages the counter output on even rounds
void modified_round(const CoupledParams& p, std::vector<double>& x, std::vector<double>& scratch) {
    const int M = p.M();
    const int km1 = p.k - 1;
    scratch.resize(M);
    // odd round
    window_bwd(x, p.w, scratch);
    for (int i = 0; i < M; ++i) {
        const double y = -std::expm1(-p.gamma * (scratch[i] / p.w));
        x[i] = std::pow(y, km1);
    }
    // even round
    for (int i = 0; i < M; ++i) scratch[i] = -std::expm1(-p.gamma * x[i]);
    window_fwd(scratch, p.w, x);
    for (int i = 0; i < M; ++i) x[i] = p.eps * std::pow(x[i] / p.w, km1);
}

}  // namespace

CoupledFpResult modified_coupled_fixed_point(const CoupledParams& p, double tol, long max_iter) {
    CoupledState st = CoupledState::initial(p);
    std::vector<double> scratch, prev;
    CoupledFpResult r;
    for (long it = 0; it < max_iter; ++it) {
        prev = st.x;
        modified_round(p, st.x, scratch);
        double mx = 0.0, diff = 0.0;
        for (int i = 0; i < p.M(); ++i) {
            mx = std::max(mx, st.x[i]);
            diff = std::max(diff, std::fabs(st.x[i] - prev[i]));
        }
        r.iterations = it + 1;
        if (mx < kZero) {
            r.died = true;
            std::fill(st.x.begin(), st.x.end(), 0.0);
            break;
        }
        if (diff < tol) break;
    }
    r.x = std::move(st.x);
    return r;
}

double eps_bp_modified(int k, double gamma, int N, int w, double tol) {
    CoupledParams base{k, gamma, 0.0, N, w};
    base.validate();
    auto dies = [&](double e) {
        return modified_coupled_fixed_point(CoupledParams{k, gamma, e, N, w}, kStall).died;
    };
    if (dies(kEpsMax)) throw bracket_error("eps_bp_modified: still dies at eps=4");
    return bisect(dies, 0.0, kEpsMax, tol);
}

double beta_bp_modified_raw(int k, double eps, int N, int w, double tol) {
    CoupledParams base{k, 1.0, eps, N, w};
    base.validate();
    const double lo = 0.02, hi = kEpsMax;
    auto survives = [&](double beta) {
        return !modified_coupled_fixed_point(CoupledParams{k, k / beta, eps, N, w}, kStall).died;
    };
    if (!survives(lo)) throw bracket_error("beta_bp_modified: already dies at beta=0.02");
    if (survives(hi)) throw bracket_error("beta_bp_modified: survives at beta=4");
    return bisect(survives, lo, hi, tol);
}

double beta_bp_modified(int k, double eps, int N, int w, double tol) {
    const double raw = beta_bp_modified_raw(k, eps, N, w, tol);
    return beta_c(k, k / raw, N, w);
}

}  // namespace braidlab
