#include "amsplace/detail/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace amsplace::detail {

namespace {

// Largest alpha in (0, 1] keeping u + alpha*du >= 0.
double max_step(const Eigen::VectorXd& u, const Eigen::VectorXd& du) {
    double a = 1.0;
    for (int i = 0; i < u.size(); ++i)
        if (du[i] < 0.0) a = std::min(a, -u[i] / du[i]);
    return a;
}

}  // namespace

LpResult solve_lp(const LpProblem& lp, const std::vector<double>& v0, double tol,
                  int max_iters) {
    const int n = lp.num_vars;
    const int m = lp.num_rows();
    LpResult res;
    if (static_cast<int>(v0.size()) != n || static_cast<int>(lp.c.size()) != n)
        return res;
    if (m == 0) {  // unconstrained: only sensible when c == 0
        res.ok = true;
        res.v = v0;
        return res;
    }

    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(v0.data(), n);
    Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(lp.c.data(), n);
    Eigen::VectorXd h = Eigen::Map<const Eigen::VectorXd>(lp.rhs.data(), m);

    auto G_mul = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd out(m);
        for (int r = 0; r < m; ++r) {
            double acc = 0.0;
            for (int k = lp.row_begin[r]; k < lp.row_begin[r + 1]; ++k)
                acc += lp.coef[k] * x[lp.col[k]];
            out[r] = acc;
        }
        return out;
    };
    auto Gt_mul = [&](const Eigen::VectorXd& w) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
        for (int r = 0; r < m; ++r)
            for (int k = lp.row_begin[r]; k < lp.row_begin[r + 1]; ++k)
                out[lp.col[k]] += lp.coef[k] * w[r];
        return out;
    };

    Eigen::VectorXd s = (h - G_mul(v)).cwiseMax(1.0);
    Eigen::VectorXd z = Eigen::VectorXd::Ones(m);

    const double h_scale = 1.0 + h.cwiseAbs().maxCoeff();
    const double c_scale = 1.0 + (n > 0 ? c.cwiseAbs().maxCoeff() : 0.0);

    Eigen::MatrixXd M(n, n);
    for (int iter = 1; iter <= max_iters; ++iter) {
        Eigen::VectorXd r_p = G_mul(v) + s - h;
        Eigen::VectorXd r_d = c + Gt_mul(z);
        double mu = s.dot(z) / m;
        double obj = c.dot(v);

        if (r_p.cwiseAbs().maxCoeff() <= tol * h_scale &&
            r_d.cwiseAbs().maxCoeff() <= tol * c_scale &&
            mu <= tol * (1.0 + std::abs(obj))) {
            res.ok = true;
            res.v.assign(v.data(), v.data() + n);
            res.objective = obj;
            res.iterations = iter - 1;
            return res;
        }

        // Normal equations M = G' diag(z/s) G with light static regularization.
        Eigen::VectorXd d = z.cwiseQuotient(s);
        M.setZero();
        for (int r = 0; r < m; ++r) {
            const double dr = d[r];
            for (int k1 = lp.row_begin[r]; k1 < lp.row_begin[r + 1]; ++k1)
                for (int k2 = lp.row_begin[r]; k2 < lp.row_begin[r + 1]; ++k2)
                    M(lp.col[k1], lp.col[k2]) += dr * lp.coef[k1] * lp.coef[k2];
        }
        // Tiny relative regularization: keeps LDLT stable without distorting
        // the Newton directions when z/s spans many orders of magnitude.
        M.diagonal().array() = M.diagonal().array() * (1.0 + 1e-12) + 1e-12;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
        if (ldlt.info() != Eigen::Success) break;

        auto solve_dir = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dv,
                             Eigen::VectorXd& ds, Eigen::VectorXd& dz) {
            Eigen::VectorXd t = (rc + z.cwiseProduct(r_p)).cwiseQuotient(s);
            dv = ldlt.solve(-r_d - Gt_mul(t));
            ds = -r_p - G_mul(dv);
            dz = (rc - z.cwiseProduct(ds)).cwiseQuotient(s);
        };

        // Predictor.
        Eigen::VectorXd rc = -s.cwiseProduct(z);
        Eigen::VectorXd dv, ds, dz;
        solve_dir(rc, dv, ds, dz);
        double ap = max_step(s, ds), ad = max_step(z, dz);
        double mu_aff = (s + ap * ds).dot(z + ad * dz) / m;
        double sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
        sigma = std::clamp(sigma, 0.0, 1.0);

        // Corrector.
        rc = (sigma * mu) * Eigen::VectorXd::Ones(m) - s.cwiseProduct(z) -
             ds.cwiseProduct(dz);
        solve_dir(rc, dv, ds, dz);
        ap = std::min(1.0, 0.99 * max_step(s, ds));
        ad = std::min(1.0, 0.99 * max_step(z, dz));

        v += ap * dv;
        s += ap * ds;
        z += ad * dz;
        res.iterations = iter;
    }
    // Not converged: report the last iterate with ok=false.
    res.v.assign(v.data(), v.data() + n);
    res.objective = c.dot(v);
    return res;
}

}  // namespace amsplace::detail
