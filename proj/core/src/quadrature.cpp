#include "auctionlab/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace auctionlab {

namespace {

struct SimpsonState {
  const std::function<double(double)>* f = nullptr;
  int evaluations = 0;
  double achieved = 0.0;  // accumulated error of accepted panels
};

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

// Classic recursive adaptive Simpson with Richardson extrapolation. `whole`
// is the Simpson estimate over [a, b]; the halved estimates either accept
// the panel or recurse with a split tolerance.
double simpson_recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = (*st.f)(lm);
  double frm = (*st.f)(rm);
  st.evaluations += 2;
  double left = simpson(fa, flm, fm, m - a);
  double right = simpson(fm, frm, fb, b - m);
  double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    st.achieved += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

QuadratureResult integrate_panel(SimpsonState& st, double a, double b, double abs_tol,
                                 int max_depth) {
  QuadratureResult out;
  if (!(b > a)) return out;
  double fa = (*st.f)(a);
  double m = 0.5 * (a + b);
  double fm = (*st.f)(m);
  double fb = (*st.f)(b);
  st.evaluations += 3;
  double whole = simpson(fa, fm, fb, b - a);
  out.value = simpson_recurse(st, a, b, fa, fm, fb, whole, abs_tol, max_depth);
  return out;
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int max_depth) {
  return adaptive_simpson_panels(f, a, b, {}, abs_tol, max_depth);
}

QuadratureResult adaptive_simpson_panels(const std::function<double(double)>& f, double a,
                                         double b, const std::vector<double>& breakpoints,
                                         double abs_tol, int max_depth) {
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::invalid_argument("adaptive_simpson: endpoints must be finite");
  }
  if (!(abs_tol > 0.0)) throw std::invalid_argument("adaptive_simpson: need abs_tol > 0");
  QuadratureResult out;
  if (!(b > a)) return out;

  std::vector<double> edges;
  edges.push_back(a);
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  SimpsonState st;
  st.f = &f;
  double panel_tol = abs_tol / static_cast<double>(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    QuadratureResult panel = integrate_panel(st, edges[i], edges[i + 1], panel_tol, max_depth);
    out.value += panel.value;
  }
  out.abs_error_estimate = st.achieved;
  out.evaluations = st.evaluations;
  return out;
}

double integrate_or_throw(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
  QuadratureResult r = adaptive_simpson(f, a, b, abs_tol, max_depth);
  if (r.abs_error_estimate > abs_tol) {
    throw QuadratureError("quadrature failed to reach requested tolerance", r.abs_error_estimate);
  }
  return r.value;
}

}  // namespace auctionlab
