#include "ccbounds/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ccbounds::oracle {

Rational rat_pow(const Rational& base, unsigned exponent) {
  Rational result(1);
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

BigInt rat_floor(const Rational& x) {
  if (x < 0) throw std::invalid_argument("rat_floor: negative input");
  return numerator(x) / denominator(x);
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

namespace {

Rational pos(const Rational& x) { return x > 0 ? x : Rational(0); }

void check_sorted_dist(const std::vector<Rational>& p) {
  Rational sum(0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0 || p[i] > 1) throw std::invalid_argument("oracle: probabilities must lie in [0,1]");
    if (i > 0 && p[i] > p[i - 1]) throw std::invalid_argument("oracle: probabilities must be sorted nonincreasing");
    sum += p[i];
  }
  if (sum != 1) throw std::invalid_argument("oracle: probabilities must sum to 1 exactly");
}

Rational exact_lower_avg(int n_files, int n_users, const Rational& m, const std::vector<Rational>& p) {
  Rational best(0);
  for (int k = 1; k <= n_users; ++k) {
    std::vector<Rational> s = exact_inclusion(p, k);
    Rational total(0);
    for (int n = 1; n <= n_files; ++n) {
      const Rational& sn = s[n - 1];
      Rational sn1 = (n < n_files) ? s[n] : Rational(0);
      total += (sn - sn1) * pos(Rational(n) - k * m);
    }
    if (k == 1 || total > best) best = total;
  }
  return best;
}

Rational exact_lower_cutset(int n_files, int n_users, const Rational& m) {
  Rational best(0);
  int k_max = std::min(n_files, n_users);
  for (int k = 1; k <= k_max; ++k) {
    Rational v = pos(Rational(k) - Rational(k, n_files / k) * m);
    if (k == 1 || v > best) best = v;
  }
  return best;
}

Rational exact_rate_mn(int n_files, int n_users, const Rational& m) {
  if (m < 0 || m > n_files) throw std::invalid_argument("oracle: memory outside [0, N]");
  if (m == 0) return Rational(std::min(n_users, n_files));
  Rational q = m / n_files;
  Rational branch = (1 - rat_pow(1 - q, static_cast<unsigned>(n_users))) / m;
  return (n_files - m) * std::min(branch, Rational(1));
}

}  // namespace

std::vector<Rational> exact_inclusion(const std::vector<Rational>& p, int k) {
  if (k < 1) throw std::invalid_argument("oracle: k must be >= 1");
  std::vector<Rational> s;
  s.reserve(p.size());
  for (const Rational& pn : p) s.push_back(1 - rat_pow(1 - pn, static_cast<unsigned>(k)));
  return s;
}

Rational exact_bound_eval(FormulaId formula, int n_files, int n_users, const Rational& memory,
                          const std::vector<Rational>* p) {
  if (n_files < 1 || n_users < 1) throw std::invalid_argument("oracle: bad instance");
  if (memory < 0) throw std::invalid_argument("oracle: memory must be >= 0");
  switch (formula) {
    case FormulaId::LowerAvg: {
      if (!p || static_cast<int>(p->size()) != n_files)
        throw std::invalid_argument("oracle: LowerAvg needs a distribution of size n_files");
      check_sorted_dist(*p);
      return exact_lower_avg(n_files, n_users, memory, *p);
    }
    case FormulaId::LowerUniform: {
      std::vector<Rational> u(n_files, Rational(1, n_files));
      return exact_lower_avg(n_files, n_users, memory, u);
    }
    case FormulaId::LowerCutset:
      return exact_lower_cutset(n_files, n_users, memory);
    case FormulaId::RateMn:
      return exact_rate_mn(n_files, n_users, memory);
  }
  throw std::logic_error("oracle: unknown formula");
}

Rational exact_single_user_optimal(const std::vector<Rational>& s, const Rational& memory) {
  if (memory < 0) throw std::invalid_argument("oracle: memory must be >= 0");
  const int n = static_cast<int>(s.size());
  Rational total(0);
  for (int i = 1; i <= n; ++i) {
    Rational next = (i < n) ? s[i] : Rational(0);
    total += (s[i - 1] - next) * pos(Rational(i) - memory);
  }
  return total;
}

Rational exact_prefix_cache(const std::vector<Rational>& s, const Rational& memory) {
  const int n = static_cast<int>(s.size());
  if (memory < 0 || memory > n) throw std::invalid_argument("oracle: memory outside [0, N]");
  BigInt mfloor = rat_floor(memory);
  int m = mfloor.convert_to<int>();
  Rational f = memory - Rational(mfloor);
  Rational total(0);
  if (m + 1 <= n) total += (1 - f) * s[m];
  for (int i = m + 2; i <= n; ++i) total += s[i - 1];
  return total;
}

std::vector<Rational> exact_marginals(const RationalSubsetDist& py) {
  if (py.n_files < 1 || py.n_files > 64)
    throw std::invalid_argument("oracle: n_files must lie in [1, 64]");
  for (const auto& [mask, prob] : py.support) {
    if (py.n_files < 64 && (mask >> py.n_files) != 0)
      throw std::invalid_argument("oracle: subset index out of range");
    if (prob <= 0) throw std::invalid_argument("oracle: probabilities must be positive");
  }
  std::vector<Rational> s(py.n_files, Rational(0));
  for (const auto& [mask, prob] : py.support)
    for (int i = 0; i < py.n_files; ++i)
      if (mask & (std::uint64_t{1} << i)) s[i] += prob;
  std::sort(s.begin(), s.end(), std::greater<Rational>());
  return s;
}

bool prefix_identity_check(const RationalSubsetDist& py, const Rational& memory) {
  std::vector<Rational> s = exact_marginals(py);
  return exact_prefix_cache(s, memory) == exact_single_user_optimal(s, memory);
}

Rational line_intersection(int k, int n_files) {
  if (n_files < 2) throw std::invalid_argument("oracle: n_files must be >= 2");
  if (k < 1) throw std::invalid_argument("oracle: k must be >= 1");
  // (1 - b^k)(N - k x) = (1 - b^{k+1})(N - (k+1) x) with b = (N-1)/N
  Rational b(n_files - 1, n_files);
  Rational a1 = 1 - rat_pow(b, static_cast<unsigned>(k));
  Rational a2 = 1 - rat_pow(b, static_cast<unsigned>(k + 1));
  Rational denom = k * a1 - (k + 1) * a2;
  if (denom == 0) throw std::domain_error("oracle: lines are parallel");
  return n_files * (a1 - a2) / denom;
}

Rational omega_closed_form(int k, int n_files) {
  if (n_files < 2) throw std::invalid_argument("oracle: n_files must be >= 2");
  if (k < 1) throw std::invalid_argument("oracle: k must be >= 1");
  Rational x = rat_pow(Rational(n_files - 1, n_files), static_cast<unsigned>(k));
  return n_files * x / (n_files + (k + 1 - n_files) * x);
}

Rational expected_rate_exhaustive(int n_files, int n_users, const std::vector<Rational>& p,
                                  const Rational& pooled_memory) {
  if (n_files < 1 || n_users < 1) throw std::invalid_argument("oracle: bad instance");
  if (static_cast<int>(p.size()) != n_files)
    throw std::invalid_argument("oracle: distribution size must equal n_files");
  check_sorted_dist(p);
  if (pooled_memory < 0 || pooled_memory > n_files)
    throw std::invalid_argument("oracle: pooled memory outside [0, N]");
  double tuples = std::pow(static_cast<double>(n_files), n_users);
  if (tuples > 1e6) throw std::invalid_argument("oracle: instance too large (N^K > 1e6)");

  int m = rat_floor(pooled_memory).convert_to<int>();
  Rational f = pooled_memory - m;

  std::vector<int> d(n_users, 0);  // odometer over [0, N)^K
  Rational total(0);
  for (;;) {
    Rational weight(1);
    std::uint64_t mask = 0;
    for (int u = 0; u < n_users; ++u) {
      weight *= p[d[u]];
      mask |= std::uint64_t{1} << d[u];
    }
    Rational cost(0);
    for (int n = 1; n <= n_files; ++n) {
      if (!(mask & (std::uint64_t{1} << (n - 1)))) continue;
      if (n == m + 1)
        cost += 1 - f;
      else if (n >= m + 2)
        cost += 1;
    }
    total += weight * cost;
    int u = 0;
    while (u < n_users && ++d[u] == n_files) d[u++] = 0;
    if (u == n_users) break;
  }
  return total;
}

std::vector<std::pair<double, double>> envelope_bruteforce(
    std::span<const std::pair<double, double>> samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2) throw std::invalid_argument("oracle: need at least 2 samples");
  for (int i = 1; i < n; ++i)
    if (!(samples[i].first > samples[i - 1].first))
      throw std::invalid_argument("oracle: abscissas must be strictly increasing");
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    double best = samples[k].second;
    for (int i = 0; i <= k; ++i) {
      for (int j = std::max(k, i + 1); j < n; ++j) {
        double x0 = samples[i].first, y0 = samples[i].second;
        double x1 = samples[j].first, y1 = samples[j].second;
        double value = y0 + (y1 - y0) * (samples[k].first - x0) / (x1 - x0);
        best = std::min(best, value);
      }
    }
    out.emplace_back(samples[k].first, best);
  }
  return out;
}

namespace {

class CertificateRun {
 public:
  CertificateRun(std::ostream& out, VerifyReport& report) : out_(out), report_(report) {}

  void equal(const std::string& name, const Rational& got, const Rational& expected) {
    ++report_.checked;
    if (got == expected) {
      out_ << "ok " << name << " = " << expected << "\n";
    } else {
      ++report_.failed;
      out_ << "FAIL " << name << ": expected " << expected << ", got " << got << "\n";
    }
  }

  void holds(const std::string& name, bool condition, const std::string& detail = "") {
    ++report_.checked;
    if (condition) {
      out_ << "ok " << name << "\n";
    } else {
      ++report_.failed;
      out_ << "FAIL " << name << (detail.empty() ? "" : ": " + detail) << "\n";
    }
  }

 private:
  std::ostream& out_;
  VerifyReport& report_;
};

}  // namespace

VerifyReport verify_all(std::ostream& out, const VerifyOptions& opts) {
  VerifyReport report;
  CertificateRun run(out, report);

  run.equal("lower_uniform(5,5,1)",
            exact_bound_eval(FormulaId::LowerUniform, 5, 5, Rational(1)), Rational(27, 25));
  run.equal("lower_cutset(5,5,1)",
            exact_bound_eval(FormulaId::LowerCutset, 5, 5, Rational(1)), Rational(1));
  run.equal("rate_mn(2,2,1)", exact_bound_eval(FormulaId::RateMn, 2, 2, Rational(1)),
            Rational(3, 4));
  run.equal("rate_mn(10,15,5)", exact_bound_eval(FormulaId::RateMn, 10, 15, Rational(5)),
            Rational(32767, 32768));
  {
    std::vector<Rational> p{Rational(3, 4), Rational(1, 4)};
    run.equal("lower_avg(2,2,1/2; p=3/4,1/4)",
              exact_bound_eval(FormulaId::LowerAvg, 2, 2, Rational(1, 2), &p), Rational(5, 8));
  }
  {
    std::vector<Rational> u(5, Rational(1, 5));
    run.equal("inclusion s_n(k=2), uniform over 5", exact_inclusion(u, 2)[0], Rational(9, 25));
  }

  // corner abscissas: exact line intersection vs closed form
  {
    Rational li = line_intersection(1, 10);
    if (opts.omega_perturbation != 0.0) li += Rational(opts.omega_perturbation);
    run.equal("line_intersection(1,10)", li, Rational(45, 14));
    run.equal("omega_closed_form(1,10)", omega_closed_form(1, 10), Rational(45, 14));
    run.equal("line_intersection(1,5)", line_intersection(1, 5), Rational(20, 13));
    bool all = true;
    for (int n = 5; n <= 30 && all; ++n)
      for (int k = 1; k <= (n + 3) / 4 - 1 && all; ++k)
        all = (line_intersection(k, n) == omega_closed_form(k, n));
    run.holds("omega closed form matches intersection, N in [5,30]", all);
  }

  {
    std::vector<Rational> p{Rational(3, 4), Rational(1, 4)};
    std::vector<Rational> s = exact_inclusion(p, 2);
    run.equal("inclusion s_1 (p=3/4,1/4, k=2)", s[0], Rational(15, 16));
    run.equal("inclusion s_2 (p=3/4,1/4, k=2)", s[1], Rational(7, 16));
    run.equal("expected_rate_exhaustive(2,2,p,M=1)", expected_rate_exhaustive(2, 2, p, Rational(1)),
              Rational(7, 16));
    run.equal("pooled expectation equals inner sum", expected_rate_exhaustive(2, 2, p, Rational(1)),
              exact_single_user_optimal(s, Rational(1)));
  }
  {
    std::vector<Rational> u(3, Rational(1, 3));
    run.equal("exhaustive matches inclusion path (uniform 3, K=2, M=1)",
              expected_rate_exhaustive(3, 2, u, Rational(1)),
              exact_single_user_optimal(exact_inclusion(u, 2), Rational(1)));
  }

  {
    std::vector<Rational> thirds(3, Rational(1, 3));
    run.equal("single_user_optimal(s=1/3,1/3,1/3; M=1)",
              exact_single_user_optimal(thirds, Rational(1)), Rational(2, 3));
    RationalSubsetDist pairs{3, {{0b011, Rational(1, 2)}, {0b100, Rational(1, 2)}}};
    run.holds("prefix identity (pair/singleton dist, M=3/2)",
              prefix_identity_check(pairs, Rational(3, 2)));
    run.equal("prefix rate (pair/singleton dist, M=3/2)",
              exact_prefix_cache(exact_marginals(pairs), Rational(3, 2)), Rational(3, 4));
  }

  return report;
}

}  // namespace ccbounds::oracle
