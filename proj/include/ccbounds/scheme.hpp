#ifndef CCBOUNDS_SCHEME_HPP
#define CCBOUNDS_SCHEME_HPP

#include "ccbounds/rng.hpp"
#include "ccbounds/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ccbounds::scheme {

// Bit-level simulation of decentralized placement with coded and plain
// delivery. Users are 0-based internally; files are 1-based labels.

/** Random file contents, one byte per bit. */
struct FileBits {
  int n_files = 0;
  int file_bits = 0;
  std::vector<std::vector<std::uint8_t>> bits;  // [file-1][position] in {0,1}

  static FileBits random(int n_files, int file_bits, SplitMix64& rng);
};

enum class PlacementMode {
  FixedCount,  // every user caches exactly floor((M/N) F) bits of every file
  Bernoulli,   // every bit cached independently with probability M/N
};

/** Which users cached each bit of each file. */
struct BitPlacement {
  int n_files = 0;
  int n_users = 0;
  int file_bits = 0;
  double memory = 0.0;
  PlacementMode mode = PlacementMode::FixedCount;
  std::vector<std::vector<std::uint32_t>> cached_by;  // [file-1][position] -> user mask
  std::vector<std::string> warnings;  // budget deviations beyond 5 sigma

  bool user_has(int user, int file, int position) const {
    return (cached_by[file - 1][position] >> user) & 1u;
  }
  long cache_load(int user) const;  // bits cached across all files
};

/** Independent per-user placement; memory must lie in [0, N], users <= 32. */
BitPlacement place_decentralized(const ProblemInstance& inst, int file_bits,
                                 PlacementMode mode, SplitMix64& rng);

/** One multicast: the XOR of each served user's wanted bits, zero-padded. */
struct CodedMessage {
  std::uint32_t subset = 0;            // users served, bit k = user k
  std::vector<std::uint8_t> payload;   // length = longest constituent list
};

/** Plain transmission of one file's bits missed by every requester. */
struct UncodedMessage {
  int file = 0;                            // 1-based label
  std::vector<std::uint32_t> positions;    // ascending bit positions
  std::vector<std::uint8_t> payload;       // bit values at those positions
};

struct DeliveryTranscript {
  std::vector<int> demands;  // demands[user] = 1-based file label
  std::vector<CodedMessage> coded;
  std::vector<UncodedMessage> uncoded;

  long coded_bit_count() const;
  long uncoded_bit_count() const;
};

/**
 * Serve the given demands both ways: subset-XOR multicasts (subsets in
 * decreasing size, ascending mask; empty ones skipped) and plain delivery
 * of each requested file's union of missing bits. Users <= 16.
 */
DeliveryTranscript deliver(const BitPlacement& placement, const FileBits& content,
                           const std::vector<int>& demands);

struct DecodeReport {
  bool ok = true;
  std::string diagnostic;  // empty when ok
};

/**
 * Replay the coded messages at every user, using only that user's cached
 * bits and the transcript, and compare against the true file.
 */
DecodeReport decode_coded(const BitPlacement& placement, const FileBits& content,
                          const DeliveryTranscript& transcript);

/** Same check for the plain-delivery half of the transcript. */
DecodeReport decode_uncoded(const BitPlacement& placement, const FileBits& content,
                            const DeliveryTranscript& transcript);

/** One line per message: kind, subset or file, length, FNV-1a 64 digest. */
void dump_transcript(std::ostream& out, const DeliveryTranscript& transcript);

/** FNV-1a 64 over the payload bytes. */
std::uint64_t payload_digest(const std::vector<std::uint8_t>& payload);

enum class DemandModel {
  WorstDistinct,  // demands[k] = (k mod N) + 1, deterministic
  IidUniform,
  IidPopularity,  // i.i.d. from a supplied popularity distribution
};

struct SimOptions {
  int trials = 50;
  int file_bits = 10000;
  std::uint64_t seed = 12345;
  PlacementMode placement = PlacementMode::FixedCount;
  DemandModel demands = DemandModel::IidUniform;
  const RequestDistribution* popularity = nullptr;  // required for IidPopularity
};

struct SimResult {
  int trials = 0;
  double mean_rate = 0.0;     // mean over trials of min(coded, plain) / F
  double stderr_rate = 0.0;   // standard error of that mean
  double mean_coded = 0.0;
  double mean_uncoded = 0.0;
  double analytic_rate = 0.0; // closed-form decentralized rate at (N, K, M)
  int decode_failures = 0;
  int budget_warnings = 0;
  std::string first_failure;  // first decode diagnostic, if any
};

/**
 * Monte-Carlo rate of the simulated scheme. Per trial the placement,
 * contents, and demands use independent derived streams, both delivery
 * modes are decoded, and the cheaper one is charged.
 */
SimResult empirical_rate(const ProblemInstance& inst, const SimOptions& opts);

struct SingleUserResult {
  int trials = 0;
  double mean_rate = 0.0;
  double stderr_rate = 0.0;
  double analytic_rate = 0.0;  // most-included-first rate at the realized cache size
};

/**
 * One cache, requests drawn from a distribution over file subsets. The cache
 * holds whole files in decreasing marginal-inclusion order plus a leading
 * fraction of the next; delivery sends what the request set still misses.
 */
SingleUserResult simulate_single_user(const SubsetRequestDistribution& requests,
                                      int n_files, double memory, int file_bits,
                                      int trials, std::uint64_t seed);

}  // namespace ccbounds::scheme

#endif
