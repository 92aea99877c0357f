#include "elmlab/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace elmlab {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

struct Simplex {
  std::vector<std::vector<double>> vertices;
  std::vector<double> values;
};

class Runner {
public:
  Runner(const Objective& f, std::size_t budget) : f_(f), budget_(budget) {}

  double eval(std::span<const double> x)
  {
    ++evaluations;
    const double v = f_(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  }

  // Returns true on convergence; false if the iteration budget ran out.
  bool minimise(Simplex& s, double tol)
  {
    const std::size_t n = s.vertices.size() - 1;
    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), second(n);
    while (true) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.values[a] < s.values[b]; });
      const std::size_t best = order.front();
      const std::size_t worst = order.back();
      const std::size_t next_worst = order[n - 1];
      if (s.values[worst] - s.values[best] <= tol) return true;
      if (iterations >= budget_) return false;
      ++iterations;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == worst) continue;
        for (std::size_t i = 0; i < n; ++i) centroid[i] += s.vertices[v][i] / static_cast<double>(n);
      }
      auto along = [&](double coef, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = centroid[i] + coef * (s.vertices[worst][i] - centroid[i]);
      };

      along(-kReflect, trial);
      const double f_reflect = eval(trial);
      if (f_reflect < s.values[best]) {
        along(-kReflect * kExpand, second);
        const double f_expand = eval(second);
        if (f_expand < f_reflect) {
          s.vertices[worst] = second;
          s.values[worst] = f_expand;
        } else {
          s.vertices[worst] = trial;
          s.values[worst] = f_reflect;
        }
        continue;
      }
      if (f_reflect < s.values[next_worst]) {
        s.vertices[worst] = trial;
        s.values[worst] = f_reflect;
        continue;
      }
      const bool outside = f_reflect < s.values[worst];
      along(outside ? -kReflect * kContract : kContract, second);
      const double f_contract = eval(second);
      if (f_contract < std::min(f_reflect, s.values[worst])) {
        s.vertices[worst] = second;
        s.values[worst] = f_contract;
        continue;
      }
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == best) continue;
        for (std::size_t i = 0; i < n; ++i) {
          s.vertices[v][i] = s.vertices[best][i] + kShrink * (s.vertices[v][i] - s.vertices[best][i]);
        }
        s.values[v] = eval(s.vertices[v]);
      }
    }
  }

  Simplex around(const std::vector<double>& x, double fx, double step)
  {
    Simplex s;
    s.vertices.push_back(x);
    s.values.push_back(fx);
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::vector<double> v = x;
      v[i] += step;
      s.values.push_back(eval(v));
      s.vertices.push_back(std::move(v));
    }
    return s;
  }

  std::size_t iterations = 0;
  std::size_t evaluations = 0;

private:
  const Objective& f_;
  std::size_t budget_;
};

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start, const NelderMeadOptions& options)
{
  if (start.empty()) {
    throw std::invalid_argument("nelder_mead: empty parameter vector");
  }
  if (!(options.tolerance > 0.0)) {
    throw std::invalid_argument("nelder_mead: tolerance must be positive");
  }
  Runner runner(f, options.max_iterations);
  NelderMeadResult result;
  result.x = std::move(start);
  result.value = runner.eval(result.x);

  for (std::size_t round = 0; round <= options.restarts; ++round) {
    Simplex s = runner.around(result.x, result.value, options.initial_step);
    const bool converged = runner.minimise(s, options.tolerance);
    const auto best = static_cast<std::size_t>(
        std::distance(s.values.begin(), std::min_element(s.values.begin(), s.values.end())));
    const double improvement = result.value - s.values[best];
    if (s.values[best] <= result.value) {
      result.x = s.vertices[best];
      result.value = s.values[best];
    }
    result.converged = converged;
    if (!converged) break;
    if (round > 0 && improvement <= options.tolerance) break;
  }
  result.iterations = runner.iterations;
  result.evaluations = runner.evaluations;
  return result;
}

}  // namespace elmlab
