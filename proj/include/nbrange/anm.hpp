#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "nbrange/common.hpp"
#include "nbrange/linalg.hpp"

namespace nbrange {

/// Completion problem for the squared channel response: observed entries of
/// h^2 on the index set Omega, K total tones.
struct AnmProblem {
    CVec observed;          // one value per entry of omega
    std::vector<int> omega; // ascending, subset of 0..K-1
    int K = 0;

    void validate() const {
        if (K < 1) throw std::invalid_argument("AnmProblem: K must be positive");
        if (omega.empty()) throw std::invalid_argument("AnmProblem: empty observation set");
        if (omega.size() != observed.size()) throw std::invalid_argument("AnmProblem: size mismatch");
        for (size_t i = 0; i < omega.size(); ++i) {
            if (omega[i] < 0 || omega[i] >= K) throw std::invalid_argument("AnmProblem: index out of range");
            if (i > 0 && omega[i] <= omega[i - 1]) throw std::invalid_argument("AnmProblem: indices not ascending");
        }
    }
};

struct AnmConfig {
    double rho = 1.0;    // ADMM penalty; adapted by residual balancing
    int max_iter = 100;
    double eps_abs = 1e-6;
    double eps_rel = 1e-6;
    bool adapt_rho = true;
    double balance_ratio = 10.0;  // residual ratio triggering a rho step
    double over_relaxation = 1.6; // alpha in [1, 1.8]; 1 disables
};

struct AnmSolution {
    CVec h_sq_full;   // length K; equals the observations on Omega exactly
    CVec u;           // Toeplitz generator, length K
    double t = 0.0;
    int iterations = 0;
    bool converged = false;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double min_eigenvalue = 0.0;             // of the final block matrix
    int eig_dim = 0;                         // per-iteration eigendecomposition size, K+1
    std::vector<double> residual_history;    // max(primal, dual) per iteration
};

namespace detail {

/// Assembles the (K+1) x (K+1) block matrix [[Toep(u), h], [h^H, t]].
inline CMat anm_block(const CVec& u, const CVec& h, double t) {
    const int k = static_cast<int>(u.size());
    CMat b(k + 1, k + 1);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) b(i, j) = (i >= j) ? u[i - j] : std::conj(u[j - i]);
    for (int i = 0; i < k; ++i) {
        b(i, k) = h[i];
        b(k, i) = std::conj(h[i]);
    }
    b(k, k) = t;
    return b;
}

} // namespace detail

/// Completes missing entries of h^2 by atomic-norm minimization: the SDP
///
///   min (1/(2K)) trace(Toep(u)) + t/2
///   s.t. [[Toep(u), h], [h^H, t]] PSD,  h restricted to Omega fixed
///
/// solved with ADMM. The splitting variable is the PSD copy of the block
/// matrix; each iteration does a closed-form (u, t, h_missing) update
/// (diagonal averaging), one (K+1)-dim eigendecomposition for the PSD
/// projection, and a dual update. Observed entries are enforced, never
/// penalized. A final diagonal shift on (u0, t) restores PSD feasibility of
/// the reported block to within eigensolver precision.
inline AnmSolution recover_anm(const AnmProblem& problem, const AnmConfig& cfg = {}) {
    problem.validate();
    const int k = problem.K;
    const int n = k + 1;

    if (static_cast<int>(problem.omega.size()) == k) {
        // nothing missing; the equality constraints pin the solution
        AnmSolution sol;
        sol.h_sq_full = problem.observed;
        sol.u.assign(k, 0.0);
        sol.converged = true;
        sol.eig_dim = n;
        return sol;
    }

    std::vector<uint8_t> observed_mask(k, 0);
    CVec b_raw(k, 0.0);
    CVec b_obs(k, 0.0);
    double obs_power = 0.0;
    for (size_t i = 0; i < problem.omega.size(); ++i) {
        observed_mask[problem.omega[i]] = 1;
        b_raw[problem.omega[i]] = problem.observed[i];
        b_obs[problem.omega[i]] = problem.observed[i];
        obs_power += std::norm(problem.observed[i]);
    }
    // Solve in normalized units; the SDP is positively homogeneous so the
    // solution scales back exactly.
    const double scale = std::sqrt(std::max(obs_power / problem.omega.size(), 1e-300));
    for (auto& v : b_obs) v /= scale;

    CVec u(k, 0.0);
    CVec h = b_obs;
    double t = 0.0;
    {
        double p = 0.0;
        for (const auto& v : b_obs) p += std::norm(v);
        p /= k;
        u[0] = p;
        t = p;
    }

    double rho = cfg.rho;
    CMat z = project_psd(detail::anm_block(u, h, t));
    CMat dual(n, n); // scaled dual variable

    AnmSolution sol;
    sol.eig_dim = n;
    sol.residual_history.reserve(cfg.max_iter);

    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        // (u, t, h_missing) update against W = Z - U, diagonal averaging
        for (int d = 0; d < k; ++d) {
            cdouble acc = 0.0;
            for (int i = d; i < k; ++i) acc += z(i, i - d) - dual(i, i - d);
            if (d == 0) {
                u[0] = cdouble(acc.real() / k - 1.0 / (2.0 * rho * k), 0.0);
            } else {
                u[d] = acc / static_cast<double>(k - d);
            }
        }
        t = (z(k, k) - dual(k, k)).real() - 1.0 / (2.0 * rho);
        for (int i = 0; i < k; ++i) {
            if (observed_mask[i]) {
                h[i] = b_obs[i];
            } else {
                // both off-diagonal blocks carry h; average their targets
                h[i] = 0.5 * ((z(i, k) - dual(i, k)) + std::conj(z(k, i) - dual(k, i)));
            }
        }

        const CMat block = detail::anm_block(u, h, t);

        // Z update on the over-relaxed iterate: alpha*B + (1-alpha)*Z
        const double alpha = cfg.over_relaxation;
        CMat relaxed(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) relaxed(i, j) = alpha * block(i, j) + (1.0 - alpha) * z(i, j);

        CMat znew(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) znew(i, j) = relaxed(i, j) + dual(i, j);
        znew = project_psd(znew);

        double primal = 0.0, dual_res = 0.0, bn = 0.0, zn = 0.0, un = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                primal += std::norm(block(i, j) - znew(i, j));
                dual_res += std::norm(znew(i, j) - z(i, j));
                bn += std::norm(block(i, j));
                zn += std::norm(znew(i, j));
            }
        }
        z = znew;

        // U update
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dual(i, j) += relaxed(i, j) - z(i, j);
        for (const auto& v : dual.data()) un += std::norm(v);

        primal = std::sqrt(primal);
        dual_res = rho * std::sqrt(dual_res);
        sol.iterations = iter;
        sol.primal_residual = primal;
        sol.dual_residual = dual_res;
        sol.residual_history.push_back(std::max(primal, dual_res));

        const double eps_pri = n * cfg.eps_abs + cfg.eps_rel * std::sqrt(std::max(bn, zn));
        const double eps_dual = n * cfg.eps_abs + cfg.eps_rel * rho * std::sqrt(un);
        if (primal <= eps_pri && dual_res <= eps_dual) {
            sol.converged = true;
            break;
        }

        if (cfg.adapt_rho) {
            if (primal > cfg.balance_ratio * dual_res && rho < 1e6) {
                rho *= 2.0;
                for (auto& v : dual.data()) v *= 0.5;
            } else if (dual_res > cfg.balance_ratio * primal && rho > 1e-6) {
                rho *= 0.5;
                for (auto& v : dual.data()) v *= 2.0;
            }
        }
    }

    // Feasibility restoration: lift the diagonal just enough that the
    // reported block matrix is PSD within eigensolver precision.
    CMat final_block = detail::anm_block(u, h, t);
    const auto eig = eig_hermitian(final_block);
    const double lam_min = eig.eigenvalues.back();
    if (lam_min < 0.0) {
        const double shift = -lam_min + 1e-12 * std::max(1.0, eig.eigenvalues.front());
        u[0] += shift;
        t += shift;
        final_block = detail::anm_block(u, h, t);
    }
    sol.min_eigenvalue = eig_hermitian(final_block).eigenvalues.back() * scale;

    sol.h_sq_full.resize(k);
    for (int i = 0; i < k; ++i) sol.h_sq_full[i] = observed_mask[i] ? b_raw[i] : h[i] * scale;
    sol.u.resize(k);
    for (int i = 0; i < k; ++i) sol.u[i] = u[i] * scale;
    sol.t = t * scale;
    return sol;
}

} // namespace nbrange
