#include "avocast/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace avocast {

GradCheckReport check_gradients(std::span<const std::pair<std::string, TensorPtr>> tensors,
                                const std::function<TensorPtr(Tape&)>& build_loss,
                                double epsilon, double rel_tol, double abs_floor) {
  if (epsilon <= 0.0) throw std::invalid_argument("gradcheck: epsilon must be positive");

  for (const auto& [name, t] : tensors) t->clear_grad();
  std::vector<std::vector<double>> analytic;
  {
    Tape tape;
    TensorPtr loss = build_loss(tape);
    tape.backward(loss);
    for (const auto& [name, t] : tensors) {
      if (!t->has_grad()) {
        throw std::runtime_error("gradcheck: backward did not reach tensor '" + name + "'");
      }
      analytic.emplace_back(t->grad().begin(), t->grad().end());
      t->clear_grad();
    }
  }

  auto eval = [&build_loss] {
    Tape tape;
    return build_loss(tape)->value();
  };

  GradCheckReport report;
  report.rel_tolerance = rel_tol;
  const double denom_floor = abs_floor / rel_tol;
  for (std::size_t ti = 0; ti < tensors.size(); ++ti) {
    const TensorPtr& t = tensors[ti].second;
    auto values = t->mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + epsilon;
      const double plus = eval();
      values[i] = saved - epsilon;
      const double minus = eval();
      values[i] = saved;

      const double numeric = (plus - minus) / (2.0 * epsilon);
      const double a = analytic[ti][i];
      const double abs_err = std::fabs(a - numeric);
      const double rel = abs_err / std::max({std::fabs(a), std::fabs(numeric), denom_floor});
      ++report.elements_checked;
      report.max_abs_error = std::max(report.max_abs_error, abs_err);
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_tensor = tensors[ti].first + "[" + std::to_string(i) + "]";
      }
    }
  }
  return report;
}

}  // namespace avocast
