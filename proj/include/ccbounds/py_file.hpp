#ifndef CCBOUNDS_PY_FILE_HPP
#define CCBOUNDS_PY_FILE_HPP

#include "ccbounds/oracle.hpp"
#include "ccbounds/types.hpp"

#include <iosfwd>
#include <string>

namespace ccbounds {

/** A parsed request-subset distribution, exact and double forms side by side. */
struct SubsetDistFile {
  oracle::RationalSubsetDist exact;
  SubsetRequestDistribution rounded;
};

/**
 * One line per subset: comma-separated 1-based file indices ("-" for the
 * empty set), whitespace, then a probability written as a decimal or a
 * fraction "a/b". "#" starts a comment. Probabilities must be positive and
 * sum to exactly 1. Errors cite the offending line number.
 */
SubsetDistFile parse_subset_dist(std::istream& in, int n_files);
SubsetDistFile load_subset_dist(const std::string& path, int n_files);

/** Per-file popularity: one probability per line for files 1..N, same lexicon. */
RequestDistribution parse_popularity(std::istream& in, int n_files);
RequestDistribution load_popularity(const std::string& path, int n_files);

/** Exact rational from "a/b" or decimal text; throws std::invalid_argument. */
oracle::Rational parse_probability(const std::string& text);

}  // namespace ccbounds

#endif
