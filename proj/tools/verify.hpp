#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gsk::cli {

struct Check {
  std::string name;
  double observed = 0.0;
  std::string limit;
  bool pass = false;
};

struct VerifyReport {
  std::vector<Check> checks;

  bool pass() const;
  void write(std::ostream& os) const;
};

VerifyReport verify_zeros_lemma(std::size_t trials, std::uint64_t seed);
VerifyReport verify_min_norm(std::size_t trials, std::uint64_t seed, double alpha);
VerifyReport verify_coeff_symmetry(std::size_t trials, std::uint64_t seed, double alpha);
VerifyReport verify_bulk_ratio(std::size_t trials, std::uint64_t seed);
VerifyReport verify_cover_constant(std::size_t trials, std::uint64_t seed);

}  // namespace gsk::cli
