#include "polydens/hypotheses.hpp"

#include <algorithm>

#include "polydens/error.hpp"
#include "polydens/interval.hpp"

namespace polydens {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::unknown: return "unknown";
  }
  return "unknown";
}

CheckStatus check_status_from_string(const std::string& text) {
  if (text == "pass") return CheckStatus::pass;
  if (text == "fail") return CheckStatus::fail;
  if (text == "unknown") return CheckStatus::unknown;
  throw ConfigError("unknown check status '" + text + "'");
}

bool HypothesisReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::pass; });
}

SigmaEstimate resolve_sigma(const MultiPoly& f, const std::optional<int>& sigma_override, std::uint64_t budget) {
  if (sigma_override) return user_sigma(*sigma_override, f.n_vars());
  const MultiPoly f0 = top_degree_part(f);
  const auto primes = default_sigma_primes(f0, budget);
  return singular_dimension_estimate(f0, primes, budget);
}

namespace {

constexpr long long kHuge = 1LL << 60;

HypothesisCheck positivity_check(const std::string& name, const MultiPoly& f, const Box& box) {
  const MultiPoly f0 = top_degree_part(f);
  const auto cert = certify_above(f0, box, Rational(0));
  switch (cert.verdict) {
    case PositivityVerdict::certified:
      return {name, CheckStatus::pass, "f0 > 0 on " + box.to_string() + " certified"};
    case PositivityVerdict::violated: {
      std::string at;
      if (cert.witness) {
        for (const auto& c : *cert.witness) at += (at.empty() ? "" : ",") + c.get_str();
      }
      return {name, CheckStatus::fail, "f0 <= 0 at (" + at + ")"};
    }
    case PositivityVerdict::undecided: break;
  }
  return {name, CheckStatus::unknown, "interval bisection budget exhausted"};
}

HypothesisCheck content_check(const std::string& name, const MultiPoly& f) {
  const BigInt c = content(f);
  if (c == 1) return {name, CheckStatus::pass, "content 1"};
  return {name, CheckStatus::fail, "content " + c.get_str()};
}

HypothesisCheck irreducibility_check(const std::string& name, const MultiPoly& f, const HypothesisOptions& options) {
  const auto report = heuristic_irreducibility(primitive_part(f), options.irreducibility_primes);
  switch (report.verdict) {
    case Irreducibility::irreducible: return {name, CheckStatus::pass, report.detail};
    case Irreducibility::reducible: return {name, CheckStatus::fail, report.detail};
    case Irreducibility::unknown: break;
  }
  return {name, CheckStatus::unknown, report.detail};
}

HypothesisCheck fixed_divisor_check(const std::string& name, const MultiPoly& f) {
  if (content(f) != 1) return {name, CheckStatus::unknown, "content must be 1 first"};
  const auto ps = fixed_prime_divisors(f);
  if (ps.empty()) return {name, CheckStatus::pass, "no prime divides every value"};
  std::string list;
  for (auto p : ps) list += (list.empty() ? "" : ",") + std::to_string(p);
  return {name, CheckStatus::fail, "every value divisible by " + list};
}

}  // namespace

HypothesisReport check_hypotheses(std::span<const MultiPoly> fs, const Box& box, DensityMode mode,
                                  const HypothesisOptions& options) {
  if (fs.empty()) throw DomainError("check_hypotheses: no polynomials");
  for (const auto& f : fs) {
    require_nonconstant(f, "check_hypotheses");
    if (f.n_vars() != box.dim()) throw DomainError("check_hypotheses: box dimension mismatch");
  }
  if (mode != DensityMode::joint && fs.size() != 1) {
    throw DomainError("check_hypotheses: " + to_string(mode) + " mode takes exactly one polynomial");
  }
  HypothesisReport report;
  report.mode = mode;

  MultiPoly product = MultiPoly::constant(fs.front().n_vars(), 1);
  for (const auto& f : fs) product = product * f;
  const MultiPoly& main = mode == DensityMode::joint ? product : fs.front();
  const auto n = static_cast<int>(main.n_vars());
  const int d = main.degree();

  try {
    report.sigma_used = resolve_sigma(main, options.sigma_override, options.sigma_budget);
    if (report.sigma_used.method == SigmaMethod::mod_p_estimated) {
      std::string detail = "estimated sigma " + std::to_string(report.sigma_used.value) + " from p =";
      for (auto p : report.sigma_used.witness_primes) detail += " " + std::to_string(p);
      if (report.sigma_used.disagreement) {
        report.checks.push_back({"sigma", CheckStatus::unknown, detail + " (primes disagree)"});
      } else {
        report.checks.push_back({"sigma", CheckStatus::pass, detail});
      }
    } else {
      report.checks.push_back({"sigma", CheckStatus::pass, "user-supplied sigma " + std::to_string(report.sigma_used.value)});
    }
  } catch (const Error& e) {
    report.sigma_used = SigmaEstimate{};
    report.sigma_used.value = n - 1;
    report.sigma_used.method = SigmaMethod::mod_p_estimated;
    report.checks.push_back({"sigma", CheckStatus::unknown, std::string("estimate failed: ") + e.what()});
  }
  const int gap = n - report.sigma_used.value;

  switch (mode) {
    case DensityMode::prime: {
      const long long need =
          d > 40 ? kHuge : std::max<long long>(4, static_cast<long long>(d - 1) * (1LL << (d - 1)) + 1);
      report.checks.push_back({"variables", gap >= need ? CheckStatus::pass : CheckStatus::fail,
                               "n - sigma = " + std::to_string(gap) + ", need >= " + std::to_string(need)});
      report.checks.push_back(positivity_check("box-positivity", main, box));
      report.checks.push_back(content_check("content", main));
      report.checks.push_back(irreducibility_check("irreducible", main, options));
      report.checks.push_back(fixed_divisor_check("fixed-prime-divisor", main));
      break;
    }
    case DensityMode::squarefree: {
      // n - σ > max{1, (d-1)2^d/3}, compared after multiplying by 3.
      const long long rhs = d > 40 ? kHuge : std::max<long long>(3, static_cast<long long>(d - 1) * (1LL << d));
      const bool ok = 3LL * gap > rhs;
      report.checks.push_back({"variables", ok ? CheckStatus::pass : CheckStatus::fail,
                               "n - sigma = " + std::to_string(gap) + ", need > " + std::to_string(rhs) + "/3"});
      const bool sep = separability_check(main) == Separability::separable;
      report.checks.push_back({"separable", sep ? CheckStatus::pass : CheckStatus::fail,
                               sep ? "gcd(f, grad f) is constant" : "f has a repeated factor"});
      break;
    }
    case DensityMode::joint: {
      bool distinct = true;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) distinct = distinct && !(fs[i] == fs[j]);
      }
      report.checks.push_back({"distinct", distinct ? CheckStatus::pass : CheckStatus::fail,
                               distinct ? "polynomials pairwise distinct" : "two polynomials coincide"});
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const std::string tag = "[" + std::to_string(i + 1) + "]";
        report.checks.push_back(content_check("content" + tag, fs[i]));
        report.checks.push_back(irreducibility_check("irreducible" + tag, fs[i], options));
        report.checks.push_back(positivity_check("box-positivity" + tag, fs[i], box));
      }
      const bool sep = separability_check(product) == Separability::separable;
      report.checks.push_back({"no-repeated-factor", sep ? CheckStatus::pass : CheckStatus::fail,
                               sep ? "product is separable" : "product has a repeated factor"});
      report.checks.push_back(fixed_divisor_check("fixed-prime-divisor", product));
      break;
    }
  }
  return report;
}

}  // namespace polydens
