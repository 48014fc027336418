#include "simploc/coeff.hpp"
#include "simploc/errors.hpp"

#include <algorithm>
#include <sstream>

namespace simploc::coeff {

namespace {

Integer gcd(Integer a, Integer b) {
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a < 0 ? Integer(-a) : a;
}

std::vector<Integer> prime_power_factors(Integer n) {
  std::vector<Integer> out;
  for (Integer p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    Integer power = 1;
    while (n % p == 0) {
      n /= p;
      power *= p;
    }
    out.push_back(power);
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

FgAbGroup FgAbGroup::make(std::int64_t free_rank, const std::vector<Integer>& factors, bool rational) {
  if (free_rank < 0) throw ValidationError("abelian group: negative free rank");
  FgAbGroup g;
  g.free_rank_ = free_rank;
  std::vector<Integer> torsion;
  for (const auto& f : factors) {
    Integer a = f < 0 ? Integer(-f) : f;
    if (a == 0) {
      ++g.free_rank_;
    } else if (a != 1) {
      torsion.push_back(a);
    }
  }
  if (!rational) {
    // diag(a, b) ~ diag(gcd, lcm); one sweep per position yields the chain.
    for (std::size_t i = 0; i < torsion.size(); ++i) {
      for (std::size_t j = i + 1; j < torsion.size(); ++j) {
        Integer d = gcd(torsion[i], torsion[j]);
        Integer l = torsion[i] / d * torsion[j];
        torsion[i] = d;
        torsion[j] = l;
      }
    }
    std::erase_if(torsion, [](const Integer& a) { return a == 1; });
    g.factors_ = std::move(torsion);
  }
  g.rational_ = rational && g.free_rank_ > 0;
  return g;
}

std::vector<Integer> FgAbGroup::elementary_divisors() const {
  std::vector<Integer> out;
  for (const auto& f : factors_) {
    auto powers = prime_power_factors(f);
    out.insert(out.end(), powers.begin(), powers.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string FgAbGroup::format() const {
  if (is_zero()) return "0";
  std::vector<std::string> parts;
  if (free_rank_ > 0) {
    std::string base = rational_ ? "Q" : "Z";
    parts.push_back(free_rank_ == 1 ? base : base + "^" + std::to_string(free_rank_));
  }
  for (const auto& f : factors_) parts.push_back("Z/" + f.str());
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " + ") + p;
  return out;
}

FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.rational() != b.rational() || (a.rational() && (a.has_torsion() || b.has_torsion()))) {
    throw UnsupportedError("direct sum of rational and integral groups: " + a.format() + " and " + b.format());
  }
  auto factors = a.invariant_factors();
  factors.insert(factors.end(), b.invariant_factors().begin(), b.invariant_factors().end());
  return FgAbGroup::make(a.free_rank() + b.free_rank(), factors, a.rational());
}

FgAbGroup tensor_free(const FgAbGroup& a, std::int64_t copies) {
  if (copies < 0) throw RangeError("tensor_free: negative rank");
  std::vector<Integer> factors;
  for (std::int64_t k = 0; k < copies; ++k) {
    factors.insert(factors.end(), a.invariant_factors().begin(), a.invariant_factors().end());
  }
  return FgAbGroup::make(a.free_rank() * copies, factors, a.rational());
}

std::optional<FgAbGroup> cancel(const FgAbGroup& a, const FgAbGroup& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return std::nullopt;
  if (a.rational() != b.rational()) return std::nullopt;
  if (a.free_rank() < b.free_rank()) return std::nullopt;
  auto remaining = a.elementary_divisors();
  for (const auto& d : b.elementary_divisors()) {
    auto it = std::find(remaining.begin(), remaining.end(), d);
    if (it == remaining.end()) return std::nullopt;
    remaining.erase(it);
  }
  return FgAbGroup::make(a.free_rank() - b.free_rank(), remaining, a.rational());
}

}  // namespace simploc::coeff
