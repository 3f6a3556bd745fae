#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace selfadj {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Open interval (a, b) with -inf <= a < b <= +inf.
struct Interval {
  double a = 0.0;
  double b = kInfinity;

  Interval() = default;
  Interval(double left, double right);

  bool left_finite() const noexcept { return a > -kInfinity; }
  bool right_finite() const noexcept { return b < kInfinity; }
  bool interior(double x) const noexcept { return x > a && x < b; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Real potential q on an interval for the expression -u'' + q u.
class Potential {
 public:
  struct InverseSquare {
    double kappa;
  };
  struct Constant {
    double c;
  };
  /// Piecewise-linear table; evaluation outside [grid.front(), grid.back()]
  /// is a domain error.
  struct Tabulated {
    std::vector<double> grid;
    std::vector<double> values;
  };
  struct Sum {
    std::vector<Potential> terms;
  };
  using Kind = std::variant<InverseSquare, Constant, Tabulated, Sum>;

  /// (kappa^2 - 1/4) / x^2 on (0, inf).
  static Potential inverse_square(double kappa);
  static Potential constant(double c, Interval domain = {});
  static Potential tabulated(std::vector<double> grid, std::vector<double> values,
                             Interval domain = {});
  /// All terms must share one domain.
  static Potential sum(std::vector<Potential> terms);

  const Kind& kind() const noexcept { return kind_; }
  const Interval& domain() const noexcept { return domain_; }

  /// q(x). Throws a domain error outside the open interval.
  double operator()(double x) const;

  /// Canonical identity string; two potentials with equal keys are the same
  /// function on the same interval.
  const std::string& key() const noexcept { return key_; }

  /// kappa when this is a bare inverse-square potential.
  std::optional<double> inverse_square_kappa() const;

  /// True when the left endpoint is infinite or carries a nonvanishing
  /// r^-2 term.
  bool left_singular() const;
  bool right_singular() const;

  /// Table nodes strictly inside (lo, hi), ascending. Used to keep
  /// integration segments from straddling a kink.
  std::vector<double> breakpoints(double lo, double hi) const;

  friend bool operator==(const Potential& l, const Potential& r) { return l.key_ == r.key_; }

 private:
  Potential(Kind kind, Interval domain);

  Kind kind_;
  Interval domain_;
  std::string key_;
};

/// Free-function form used by the command layer.
double evaluate_potential(const Potential& q, double x);

}  // namespace selfadj
