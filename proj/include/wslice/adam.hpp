#pragma once

#include <Eigen/Dense>

namespace wslice {

struct AdamOptions {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam on a flat parameter vector. Minimizes: params -= step(grad).
class Adam {
 public:
  Adam(Eigen::Index size, AdamOptions options);

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

  void set_learning_rate(double lr) noexcept { options_.learning_rate = lr; }

  [[nodiscard]] long long iterations() const noexcept { return t_; }
  [[nodiscard]] const AdamOptions& options() const noexcept { return options_; }

 private:
  AdamOptions options_;
  Eigen::VectorXd m_;
  Eigen::VectorXd v_;
  long long t_ = 0;
};

}  // namespace wslice
