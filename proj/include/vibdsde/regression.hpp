#pragma once

#include <span>
#include <vector>

namespace vibdsde {

// Least-squares projection onto monomials of the state (total degree <=
// `degree`), centered and scaled per batch. Rank-deficient or degenerate
// batches fall back to the degree-0 projection (the sample mean) and set
// the `degenerate` flag instead of failing.
class StepRegression {
  public:
    StepRegression(const std::vector<std::span<const double>>& coords, int degree);

    void project(std::span<const double> samples, std::span<double> fitted) const;
    // prediction leverage h_m = b(x_m)^T G^{-1} b(x_m)
    void leverage(std::span<double> out) const;

    bool degenerate() const { return degenerate_; }
    int terms() const { return n_terms_; }
    std::size_t n_paths() const { return n_paths_; }

  private:
    void project_generic(std::span<const double> samples, std::span<double> fitted) const;

    std::size_t n_paths_;
    int dim_;
    int degree_;
    int n_terms_;
    bool degenerate_ = false;
    std::vector<double> scaled_;             // dim * M, coordinate-major
    std::vector<std::vector<int>> powers_;   // exponent tuples per term (generic path)
    std::vector<double> chol_;               // lower Cholesky factor of the Gram matrix
};

struct ConditionalMoments {
    std::vector<double> y_tilde;  // M
    std::vector<double> z_hat;    // dim * M, coordinate-major
    bool degenerate = false;
};

// y_tilde = projection of samples_next; z_hat_j = projection of
// samples_next * dW_j / dt.
ConditionalMoments conditional_moments(std::span<const double> samples_next,
                                       const std::vector<std::span<const double>>& coords,
                                       const std::vector<std::span<const double>>& dw,
                                       double dt, int degree);

}  // namespace vibdsde
