#include "pdecol/problem.hpp"

namespace pdecol {

ScalarMap ScalarMap::quadratic(double c1, double c2)
{
  ScalarMap m;
  m.value = [c1, c2](double s) { return c1 * s + 0.5 * c2 * s * s; };
  m.d1 = [c1, c2](double s) { return c1 + c2 * s; };
  m.d2 = [c2](double) { return c2; };
  m.d3 = [](double) { return 0.0; };
  m.linear = (c2 == 0.0);
  m.zero = (c1 == 0.0 && c2 == 0.0);
  return m;
}

Eigen::MatrixXd kirchhoff_transform(const Eigen::Ref<const Eigen::MatrixXd>& state_coeffs,
                                    const ScalarMap& beta)
{
  return state_coeffs.unaryExpr([&beta](double s) { return beta.value(s); });
}

}  // namespace pdecol
