#include "polysep/multicentric_exact.hpp"

#include "polysep/detail/taylor_recursion.hpp"

namespace polysep {

cplx GaussianRational::to_cplx() const {
  return {re.convert_to<double>(), im.convert_to<double>()};
}

GaussianRational gaussian(long num, long den, long im_num, long im_den) {
  if (den == 0 || im_den == 0) throw InvalidArgument("gaussian: zero denominator");
  return {Rational(num, den), Rational(im_num, im_den)};
}

std::vector<std::vector<GaussianRational>> taylor_coeffs_exact(
    std::span<const GaussianRational> roots, std::span<const int> signs, int order) {
  using S = detail::Cx<Rational>;
  if (order < 0) throw InvalidArgument("taylor_coeffs_exact: order must be non-negative");
  if (roots.empty()) throw InvalidArgument("taylor_coeffs_exact: no roots");
  if (roots.size() != signs.size())
    throw InvalidArgument("taylor_coeffs_exact: every root needs a sign");
  std::vector<S> r;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k)
      if (roots[i].re == roots[k].re && roots[i].im == roots[k].im)
        throw ConditioningError("taylor_coeffs_exact: repeated root");
    r.emplace_back(roots[i].re, roots[i].im);
  }
  std::vector<std::vector<S>> germ;
  for (int s : signs) {
    if (s != 1 && s != -1) throw InvalidArgument("taylor_coeffs_exact: sign must be +1 or -1");
    std::vector<S> row(static_cast<std::size_t>(order) + 1, S(0));
    row[0] = S(s);
    germ.push_back(std::move(row));
  }
  const auto a = detail::taylor_recursion(r, S(1), germ, order);
  std::vector<std::vector<GaussianRational>> out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    for (const auto& v : a[j]) out[j].push_back({v.re, v.im});
  return out;
}

std::vector<std::vector<cplx>> to_double(const std::vector<std::vector<GaussianRational>>& t) {
  std::vector<std::vector<cplx>> out(t.size());
  for (std::size_t j = 0; j < t.size(); ++j)
    for (const auto& v : t[j]) out[j].push_back(v.to_cplx());
  return out;
}

}  // namespace polysep
