#include "vibdsde/regression.hpp"

#include <cmath>

#include "vibdsde/errors.hpp"
#include "vibdsde/kernels/kernels.hpp"

namespace vibdsde {

namespace {

constexpr int kMaxDegree1d = 7;  // power_moments kernel accumulator budget

// multi-indices of total degree <= q over dim variables, graded order
void enumerate_powers(int dim, int q, std::vector<int>& cur, int remaining,
                      std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == dim) {
        out.push_back(cur);
        return;
    }
    for (int p = 0; p <= remaining; ++p) {
        cur.push_back(p);
        enumerate_powers(dim, q, cur, remaining - p, out);
        cur.pop_back();
    }
}

// dense Cholesky, returns false on a non-positive pivot
bool cholesky(std::vector<double>& a, int n) {
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (!(s > 1e-13 * (std::abs(a[i * n + i]) + 1.0))) return false;
                a[i * n + i] = std::sqrt(s);
            } else {
                a[i * n + j] = s / a[j * n + j];
            }
        }
        for (int j = i + 1; j < n; ++j) a[i * n + j] = 0.0;
    }
    return true;
}

void chol_solve(const std::vector<double>& l, int n, std::vector<double>& b) {
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
        b[i] = s / l[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= l[k * n + i] * b[k];
        b[i] = s / l[i * n + i];
    }
}

}  // namespace

StepRegression::StepRegression(const std::vector<std::span<const double>>& coords, int degree)
    : n_paths_(coords.empty() ? 0 : coords[0].size()),
      dim_(static_cast<int>(coords.size())),
      degree_(degree) {
    if (dim_ < 1 || n_paths_ < 1)
        throw SolverError(ErrorCode::ShapeMismatch, "regression needs at least one state");
    for (const auto& c : coords)
        if (c.size() != n_paths_)
            throw SolverError(ErrorCode::ShapeMismatch, "state coordinate lengths differ");
    if (degree_ < 0) throw SolverError(ErrorCode::BadParameter, "basis degree must be >= 0");

    const auto& k = kern::active();
    const double inv_m = 1.0 / static_cast<double>(n_paths_);

    scaled_.resize(static_cast<std::size_t>(dim_) * n_paths_);
    bool flat = false;
    for (int j = 0; j < dim_; ++j) {
        const double* c = coords[j].data();
        const double mean = k.sum(c, n_paths_) * inv_m;
        const double raw = k.dot(c, c, n_paths_) * inv_m - mean * mean;
        const double sd = raw > 0.0 ? std::sqrt(raw) : 0.0;
        double* s = scaled_.data() + static_cast<std::size_t>(j) * n_paths_;
        if (sd < 1e-12 * (std::abs(mean) + 1.0)) {
            flat = true;
            for (std::size_t m = 0; m < n_paths_; ++m) s[m] = 0.0;
        } else {
            k.affine(c, 1.0 / sd, -mean / sd, s, n_paths_);
        }
    }

    std::vector<int> cur;
    enumerate_powers(dim_, degree_, cur, degree_, powers_);
    n_terms_ = static_cast<int>(powers_.size());

    if (degree_ == 0 || flat || n_paths_ < static_cast<std::size_t>(n_terms_) ||
        (dim_ == 1 && degree_ > kMaxDegree1d)) {
        degenerate_ = degree_ != 0;
        degree_ = 0;
        n_terms_ = 1;
        powers_.assign(1, std::vector<int>(dim_, 0));
        chol_.assign(1, std::sqrt(static_cast<double>(n_paths_)));
        return;
    }

    std::vector<double> gram(static_cast<std::size_t>(n_terms_) * n_terms_, 0.0);
    if (dim_ == 1) {
        std::vector<double> moments(2 * degree_ + 1);
        std::vector<double> rhs(degree_ + 1);
        k.power_moments(scaled_.data(), scaled_.data(), degree_, moments.data(), rhs.data(),
                        n_paths_);
        for (int a = 0; a < n_terms_; ++a)
            for (int b = 0; b < n_terms_; ++b) gram[a * n_terms_ + b] = moments[a + b];
    } else {
        std::vector<double> basis(n_terms_);
        for (std::size_t m = 0; m < n_paths_; ++m) {
            for (int t = 0; t < n_terms_; ++t) {
                double v = 1.0;
                for (int j = 0; j < dim_; ++j)
                    for (int p = 0; p < powers_[t][j]; ++p)
                        v *= scaled_[static_cast<std::size_t>(j) * n_paths_ + m];
                basis[t] = v;
            }
            for (int a = 0; a < n_terms_; ++a)
                for (int b = 0; b <= a; ++b) gram[a * n_terms_ + b] += basis[a] * basis[b];
        }
        for (int a = 0; a < n_terms_; ++a)
            for (int b = a + 1; b < n_terms_; ++b) gram[a * n_terms_ + b] = gram[b * n_terms_ + a];
    }

    chol_ = gram;
    if (!cholesky(chol_, n_terms_)) {
        degenerate_ = true;
        degree_ = 0;
        n_terms_ = 1;
        powers_.assign(1, std::vector<int>(dim_, 0));
        chol_.assign(1, std::sqrt(static_cast<double>(n_paths_)));
    }
}

void StepRegression::project(std::span<const double> samples, std::span<double> fitted) const {
    if (samples.size() != n_paths_ || fitted.size() != n_paths_)
        throw SolverError(ErrorCode::ShapeMismatch, "sample length does not match batch");
    const auto& k = kern::active();

    if (n_terms_ == 1) {
        const double mean = k.sum(samples.data(), n_paths_) / static_cast<double>(n_paths_);
        for (std::size_t m = 0; m < n_paths_; ++m) fitted[m] = mean;
        return;
    }
    if (dim_ == 1) {
        std::vector<double> moments(2 * degree_ + 1);
        std::vector<double> coef(degree_ + 1);
        k.power_moments(scaled_.data(), samples.data(), degree_, moments.data(), coef.data(),
                        n_paths_);
        chol_solve(chol_, n_terms_, coef);
        k.poly_eval(scaled_.data(), coef.data(), n_terms_, fitted.data(), n_paths_);
        return;
    }
    project_generic(samples, fitted);
}

void StepRegression::project_generic(std::span<const double> samples,
                                     std::span<double> fitted) const {
    std::vector<double> coef(n_terms_, 0.0);
    std::vector<double> basis(n_terms_);
    const auto eval_basis = [&](std::size_t m) {
        for (int t = 0; t < n_terms_; ++t) {
            double v = 1.0;
            for (int j = 0; j < dim_; ++j)
                for (int p = 0; p < powers_[t][j]; ++p)
                    v *= scaled_[static_cast<std::size_t>(j) * n_paths_ + m];
            basis[t] = v;
        }
    };
    for (std::size_t m = 0; m < n_paths_; ++m) {
        eval_basis(m);
        for (int t = 0; t < n_terms_; ++t) coef[t] += basis[t] * samples[m];
    }
    chol_solve(chol_, n_terms_, coef);
    for (std::size_t m = 0; m < n_paths_; ++m) {
        eval_basis(m);
        double v = 0.0;
        for (int t = 0; t < n_terms_; ++t) v += coef[t] * basis[t];
        fitted[m] = v;
    }
}

void StepRegression::leverage(std::span<double> out) const {
    if (out.size() != n_paths_)
        throw SolverError(ErrorCode::ShapeMismatch, "leverage output length mismatch");
    std::vector<double> b(n_terms_);
    for (std::size_t m = 0; m < n_paths_; ++m) {
        for (int t = 0; t < n_terms_; ++t) {
            double v = 1.0;
            for (int j = 0; j < dim_; ++j)
                for (int p = 0; p < powers_[t][j]; ++p)
                    v *= scaled_[static_cast<std::size_t>(j) * n_paths_ + m];
            b[t] = v;
        }
        // forward solve only: h = |L^{-1} b|^2
        double h = 0.0;
        for (int i = 0; i < n_terms_; ++i) {
            double s = b[i];
            for (int k2 = 0; k2 < i; ++k2) s -= chol_[i * n_terms_ + k2] * b[k2];
            b[i] = s / chol_[i * n_terms_ + i];
            h += b[i] * b[i];
        }
        out[m] = h;
    }
}

ConditionalMoments conditional_moments(std::span<const double> samples_next,
                                       const std::vector<std::span<const double>>& coords,
                                       const std::vector<std::span<const double>>& dw,
                                       double dt, int degree) {
    const std::size_t n = samples_next.size();
    for (const auto& d : dw)
        if (d.size() != n) throw SolverError(ErrorCode::ShapeMismatch, "dW length mismatch");
    if (!(dt > 0.0)) throw SolverError(ErrorCode::BadParameter, "dt must be positive");

    StepRegression reg(coords, degree);
    ConditionalMoments out;
    out.degenerate = reg.degenerate();
    out.y_tilde.resize(n);
    reg.project(samples_next, out.y_tilde);

    out.z_hat.resize(dw.size() * n);
    std::vector<double> tmp(n);
    for (std::size_t j = 0; j < dw.size(); ++j) {
        for (std::size_t m = 0; m < n; ++m) tmp[m] = samples_next[m] * dw[j][m] / dt;
        reg.project(tmp, {out.z_hat.data() + j * n, n});
    }
    return out;
}

}  // namespace vibdsde
