#include "ccbounds/scheme.hpp"

#include "ccbounds/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ccbounds::scheme {

namespace {

// floor with a small forgiveness for products like (M/N) * F that should be
// integers but land a few ulps shy
int forgiving_floor(double x) { return static_cast<int>(std::floor(x + 1e-7)); }

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%04x", v);
  return buf;
}

void check_demands(const BitPlacement& p, const std::vector<int>& demands) {
  if (static_cast<int>(demands.size()) != p.n_users)
    throw std::invalid_argument("deliver: one demand per user required");
  for (int d : demands)
    if (d < 1 || d > p.n_files) throw std::invalid_argument("deliver: demand out of range");
}

// Positions of each demanded file grouped by exact cached-by mask, via a
// counting sort keyed on the mask. Shared by the sender and the decoders so
// both sides derive identical lists from the public placement.
struct BucketTable {
  int n_users = 0;
  std::vector<int> slot_of_label;                     // label-1 -> slot, -1 if unused
  std::vector<std::vector<std::uint32_t>> offsets;    // [slot][mask..mask+1) bounds
  std::vector<std::vector<std::uint32_t>> positions;  // [slot] sorted by mask, then position

  const std::uint32_t* list(int label, std::uint32_t mask, std::uint32_t* len) const {
    const int s = slot_of_label[label - 1];
    const auto& off = offsets[s];
    *len = off[mask + 1] - off[mask];
    return positions[s].data() + off[mask];
  }
};

BucketTable build_buckets(const BitPlacement& p, const std::vector<int>& demands) {
  BucketTable t;
  t.n_users = p.n_users;
  t.slot_of_label.assign(p.n_files, -1);
  const std::uint32_t n_masks = 1u << p.n_users;
  for (int d : demands) {
    if (t.slot_of_label[d - 1] >= 0) continue;
    const int slot = static_cast<int>(t.offsets.size());
    t.slot_of_label[d - 1] = slot;
    const auto& masks = p.cached_by[d - 1];
    std::vector<std::uint32_t> off(n_masks + 1, 0);
    for (std::uint32_t m : masks) ++off[m + 1];
    for (std::uint32_t i = 1; i <= n_masks; ++i) off[i] += off[i - 1];
    std::vector<std::uint32_t> pos(masks.size());
    std::vector<std::uint32_t> cursor(off.begin(), off.end() - 1);
    for (std::uint32_t b = 0; b < masks.size(); ++b) pos[cursor[masks[b]]++] = b;
    t.offsets.push_back(std::move(off));
    t.positions.push_back(std::move(pos));
  }
  return t;
}

// nonempty user subsets, largest first, ascending mask within a size
std::vector<std::uint32_t> subset_schedule(int n_users) {
  std::vector<std::uint32_t> subsets((1u << n_users) - 1);
  std::iota(subsets.begin(), subsets.end(), 1u);
  std::stable_sort(subsets.begin(), subsets.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) > std::popcount(b);
  });
  return subsets;
}

}  // namespace

FileBits FileBits::random(int n_files, int file_bits, SplitMix64& rng) {
  if (n_files < 1 || file_bits < 1)
    throw std::invalid_argument("FileBits::random: need n_files >= 1, file_bits >= 1");
  FileBits f;
  f.n_files = n_files;
  f.file_bits = file_bits;
  f.bits.assign(n_files, std::vector<std::uint8_t>(file_bits));
  std::uint64_t word = 0;
  int left = 0;
  for (auto& file : f.bits)
    for (auto& b : file) {
      if (left == 0) {
        word = rng.next();
        left = 64;
      }
      b = static_cast<std::uint8_t>(word & 1u);
      word >>= 1;
      --left;
    }
  return f;
}

long BitPlacement::cache_load(int user) const {
  long load = 0;
  for (const auto& file : cached_by)
    for (std::uint32_t m : file) load += (m >> user) & 1u;
  return load;
}

BitPlacement place_decentralized(const ProblemInstance& inst, int file_bits,
                                 PlacementMode mode, SplitMix64& rng) {
  inst.validate();
  if (inst.memory > inst.n_files)
    throw std::domain_error("place_decentralized: memory exceeds N");
  if (inst.n_users > 32)
    throw std::invalid_argument("place_decentralized: at most 32 users");
  if (file_bits < 1) throw std::invalid_argument("place_decentralized: file_bits must be >= 1");

  BitPlacement p;
  p.n_files = inst.n_files;
  p.n_users = inst.n_users;
  p.file_bits = file_bits;
  p.memory = inst.memory;
  p.mode = mode;
  p.cached_by.assign(inst.n_files, std::vector<std::uint32_t>(file_bits, 0));

  const double q = inst.memory / inst.n_files;
  if (mode == PlacementMode::FixedCount) {
    const int count = forgiving_floor(q * file_bits);
    std::vector<std::uint32_t> pos(file_bits);
    for (auto& file : p.cached_by)
      for (int user = 0; user < inst.n_users; ++user) {
        std::iota(pos.begin(), pos.end(), 0u);
        for (int i = 0; i < count; ++i) {
          const auto j = i + rng.below(file_bits - i);
          std::swap(pos[i], pos[j]);
          file[pos[i]] |= 1u << user;
        }
      }
  } else {
    for (auto& file : p.cached_by)
      for (int b = 0; b < file_bits; ++b)
        for (int user = 0; user < inst.n_users; ++user)
          if (rng.next_double() < q) file[b] |= 1u << user;
    const double expected = static_cast<double>(inst.n_files) * file_bits * q;
    const double sigma = std::sqrt(expected * (1.0 - q));
    if (sigma > 0.0)
      for (int user = 0; user < inst.n_users; ++user) {
        const double load = static_cast<double>(p.cache_load(user));
        if (std::abs(load - expected) > 5.0 * sigma) {
          char buf[160];
          std::snprintf(buf, sizeof buf,
                        "user %d cache load %.0f is more than 5 sigma from the %.1f-bit budget",
                        user, load, expected);
          p.warnings.emplace_back(buf);
        }
      }
  }
  return p;
}

long DeliveryTranscript::coded_bit_count() const {
  long n = 0;
  for (const auto& m : coded) n += static_cast<long>(m.payload.size());
  return n;
}

long DeliveryTranscript::uncoded_bit_count() const {
  long n = 0;
  for (const auto& m : uncoded) n += static_cast<long>(m.payload.size());
  return n;
}

DeliveryTranscript deliver(const BitPlacement& placement, const FileBits& content,
                           const std::vector<int>& demands) {
  check_demands(placement, demands);
  if (placement.n_users > 16)
    throw std::invalid_argument("deliver: at most 16 users (subset enumeration)");
  if (content.n_files != placement.n_files || content.file_bits != placement.file_bits)
    throw std::invalid_argument("deliver: content does not match placement");

  DeliveryTranscript out;
  out.demands = demands;
  const BucketTable buckets = build_buckets(placement, demands);

  for (const std::uint32_t subset : subset_schedule(placement.n_users)) {
    std::uint32_t longest = 0;
    for (std::uint32_t rest = subset; rest;) {
      const int k = std::countr_zero(rest);
      rest &= rest - 1;
      std::uint32_t len;
      buckets.list(demands[k], subset ^ (1u << k), &len);
      longest = std::max(longest, len);
    }
    if (longest == 0) continue;
    CodedMessage msg;
    msg.subset = subset;
    msg.payload.assign(longest, 0);
    for (std::uint32_t rest = subset; rest;) {
      const int k = std::countr_zero(rest);
      rest &= rest - 1;
      std::uint32_t len;
      const std::uint32_t* pos = buckets.list(demands[k], subset ^ (1u << k), &len);
      const auto& file = content.bits[demands[k] - 1];
      for (std::uint32_t i = 0; i < len; ++i) msg.payload[i] ^= file[pos[i]];
    }
    out.coded.push_back(std::move(msg));
  }

  // plain fallback: per requested file, every bit someone who wants it misses
  std::vector<std::uint32_t> requesters(placement.n_files, 0);
  for (int k = 0; k < placement.n_users; ++k) requesters[demands[k] - 1] |= 1u << k;
  for (int label = 1; label <= placement.n_files; ++label) {
    const std::uint32_t want = requesters[label - 1];
    if (want == 0) continue;
    UncodedMessage msg;
    msg.file = label;
    const auto& masks = placement.cached_by[label - 1];
    const auto& file = content.bits[label - 1];
    for (std::uint32_t b = 0; b < masks.size(); ++b)
      if ((masks[b] & want) != want) {
        msg.positions.push_back(b);
        msg.payload.push_back(file[b]);
      }
    if (!msg.payload.empty()) out.uncoded.push_back(std::move(msg));
  }
  return out;
}

namespace {

// Reconstruction scratch for one user: value and provenance per bit of the
// demanded file. Provenance is the delivering subset, or kFromCache.
constexpr std::uint32_t kFromCache = 0xFFFFFFFFu;
constexpr std::uint32_t kUnknown = 0xFFFFFFFEu;
constexpr std::uint32_t kPlain = 0xFFFFFFFDu;

struct Reconstruction {
  std::vector<std::uint8_t> value;
  std::vector<std::uint32_t> source;
};

Reconstruction seed_from_cache(const BitPlacement& p, const FileBits& content, int user,
                               int label) {
  Reconstruction r;
  r.value.assign(p.file_bits, 0);
  r.source.assign(p.file_bits, kUnknown);
  const auto& file = content.bits[label - 1];
  for (int b = 0; b < p.file_bits; ++b)
    if (p.user_has(user, label, b)) {  // guard: only cached bits may be read
      r.value[b] = file[b];
      r.source[b] = kFromCache;
    }
  return r;
}

DecodeReport finish_user(const BitPlacement& p, const FileBits& content, int user, int label,
                         const Reconstruction& r) {
  const auto& file = content.bits[label - 1];
  for (int b = 0; b < p.file_bits; ++b) {
    if (r.source[b] == kUnknown) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "user %d never received bit %d of file %d", user, b, label);
      return {false, buf};
    }
    if (r.value[b] != file[b]) {
      char buf[160];
      const char* origin = r.source[b] == kFromCache ? "cache"
                           : r.source[b] == kPlain   ? "plain message"
                                                     : "coded message";
      std::snprintf(buf, sizeof buf, "user %d decoded bit %d of file %d wrong (from %s %s)", user,
                    b, label, origin,
                    r.source[b] < kPlain ? hex32(r.source[b]).c_str() : "");
      return {false, buf};
    }
  }
  return {true, {}};
}

}  // namespace

DecodeReport decode_coded(const BitPlacement& placement, const FileBits& content,
                          const DeliveryTranscript& transcript) {
  check_demands(placement, transcript.demands);
  const BucketTable buckets = build_buckets(placement, transcript.demands);
  const auto& demands = transcript.demands;

  for (int user = 0; user < placement.n_users; ++user) {
    const int label = demands[user];
    Reconstruction r = seed_from_cache(placement, content, user, label);

    for (const auto& msg : transcript.coded) {
      if (!((msg.subset >> user) & 1u)) continue;
      std::vector<std::uint8_t> residue(msg.payload);
      // cancel every other served user's contribution from cached bits
      for (std::uint32_t rest = msg.subset & ~(1u << user); rest;) {
        const int other = std::countr_zero(rest);
        rest &= rest - 1;
        std::uint32_t len;
        const std::uint32_t* pos = buckets.list(demands[other], msg.subset ^ (1u << other), &len);
        if (len > residue.size()) {
          char buf[128];
          std::snprintf(buf, sizeof buf, "message for subset %s shorter than its constituents",
                        hex32(msg.subset).c_str());
          return {false, buf};
        }
        const auto& other_file = content.bits[demands[other] - 1];
        for (std::uint32_t i = 0; i < len; ++i) {
          if (!placement.user_has(user, demands[other], pos[i])) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "user %d lacks the side bits for subset %s (file %d bit %u)", user,
                          hex32(msg.subset).c_str(), demands[other], pos[i]);
            return {false, buf};
          }
          residue[i] ^= other_file[pos[i]];
        }
      }
      std::uint32_t own_len;
      const std::uint32_t* own = buckets.list(label, msg.subset ^ (1u << user), &own_len);
      if (own_len > residue.size()) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "message for subset %s shorter than its constituents",
                      hex32(msg.subset).c_str());
        return {false, buf};
      }
      for (std::uint32_t i = 0; i < own_len; ++i) {
        r.value[own[i]] = residue[i];
        r.source[own[i]] = msg.subset;
      }
    }

    const DecodeReport rep = finish_user(placement, content, user, label, r);
    if (!rep.ok) return rep;
  }
  return {true, {}};
}

DecodeReport decode_uncoded(const BitPlacement& placement, const FileBits& content,
                            const DeliveryTranscript& transcript) {
  check_demands(placement, transcript.demands);
  for (int user = 0; user < placement.n_users; ++user) {
    const int label = transcript.demands[user];
    Reconstruction r = seed_from_cache(placement, content, user, label);
    for (const auto& msg : transcript.uncoded) {
      if (msg.file != label) continue;
      if (msg.positions.size() != msg.payload.size())
        return {false, "plain message positions and payload differ in length"};
      for (std::size_t i = 0; i < msg.positions.size(); ++i) {
        const std::uint32_t b = msg.positions[i];
        if (b >= static_cast<std::uint32_t>(placement.file_bits)) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "plain message for file %d names bit %u past the end",
                        label, b);
          return {false, buf};
        }
        r.value[b] = msg.payload[i];
        r.source[b] = kPlain;
      }
    }
    const DecodeReport rep = finish_user(placement, content, user, label, r);
    if (!rep.ok) return rep;
  }
  return {true, {}};
}

std::uint64_t payload_digest(const std::vector<std::uint8_t>& payload) {
  std::uint64_t h = 14695981039346656037ULL;
  for (std::uint8_t b : payload) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

void dump_transcript(std::ostream& out, const DeliveryTranscript& transcript) {
  out << "demands";
  for (int d : transcript.demands) out << ' ' << d;
  out << '\n';
  char buf[96];
  for (const auto& m : transcript.coded) {
    std::snprintf(buf, sizeof buf, "coded subset 0x%04x len %zu fnv 0x%016llx", m.subset,
                  m.payload.size(),
                  static_cast<unsigned long long>(payload_digest(m.payload)));
    out << buf << '\n';
  }
  for (const auto& m : transcript.uncoded) {
    std::snprintf(buf, sizeof buf, "plain file %d len %zu fnv 0x%016llx", m.file,
                  m.payload.size(),
                  static_cast<unsigned long long>(payload_digest(m.payload)));
    out << buf << '\n';
  }
}

SimResult empirical_rate(const ProblemInstance& inst, const SimOptions& opts) {
  inst.validate();
  if (inst.n_users > 16) throw std::invalid_argument("empirical_rate: at most 16 users");
  if (inst.memory > inst.n_files) throw std::domain_error("empirical_rate: memory exceeds N");
  if (opts.trials < 1) throw std::invalid_argument("empirical_rate: trials must be >= 1");
  if (opts.demands == DemandModel::IidPopularity) {
    if (opts.popularity == nullptr)
      throw std::invalid_argument("empirical_rate: popularity distribution required");
    if (opts.popularity->n_files() != inst.n_files)
      throw std::invalid_argument("empirical_rate: popularity size differs from N");
  }

  // popularity sampling uses the cumulative sums of the sorted weights,
  // mapped back to original labels
  std::vector<double> cum;
  if (opts.demands == DemandModel::IidPopularity) {
    cum.resize(opts.popularity->probs().size());
    std::partial_sum(opts.popularity->probs().begin(), opts.popularity->probs().end(),
                     cum.begin());
  }

  SimResult res;
  res.trials = opts.trials;
  res.analytic_rate = rate_mn(inst);
  std::vector<double> rates(opts.trials);
  double sum_coded = 0.0, sum_uncoded = 0.0;

  for (int t = 0; t < opts.trials; ++t) {
    SplitMix64 place_rng(derive_stream(opts.seed, 3ull * t));
    SplitMix64 content_rng(derive_stream(opts.seed, 3ull * t + 1));
    SplitMix64 demand_rng(derive_stream(opts.seed, 3ull * t + 2));

    const BitPlacement placement =
        place_decentralized(inst, opts.file_bits, opts.placement, place_rng);
    res.budget_warnings += static_cast<int>(placement.warnings.size());
    const FileBits content = FileBits::random(inst.n_files, opts.file_bits, content_rng);

    std::vector<int> demands(inst.n_users);
    switch (opts.demands) {
      case DemandModel::WorstDistinct:
        for (int k = 0; k < inst.n_users; ++k) demands[k] = k % inst.n_files + 1;
        break;
      case DemandModel::IidUniform:
        for (int& d : demands) d = static_cast<int>(demand_rng.below(inst.n_files)) + 1;
        break;
      case DemandModel::IidPopularity:
        for (int& d : demands) {
          const double u = demand_rng.next_double() * cum.back();
          const auto rank = std::lower_bound(cum.begin(), cum.end(), u) - cum.begin();
          d = opts.popularity->order()[std::min<std::size_t>(rank, cum.size() - 1)] + 1;
        }
        break;
    }

    const DeliveryTranscript transcript = deliver(placement, content, demands);
    for (const DecodeReport& rep :
         {decode_coded(placement, content, transcript),
          decode_uncoded(placement, content, transcript)}) {
      if (!rep.ok) {
        ++res.decode_failures;
        if (res.first_failure.empty()) res.first_failure = rep.diagnostic;
      }
    }

    const double coded = static_cast<double>(transcript.coded_bit_count()) / opts.file_bits;
    const double uncoded = static_cast<double>(transcript.uncoded_bit_count()) / opts.file_bits;
    sum_coded += coded;
    sum_uncoded += uncoded;
    rates[t] = std::min(coded, uncoded);
  }

  res.mean_coded = sum_coded / opts.trials;
  res.mean_uncoded = sum_uncoded / opts.trials;
  res.mean_rate = std::accumulate(rates.begin(), rates.end(), 0.0) / opts.trials;
  if (opts.trials > 1) {
    double ss = 0.0;
    for (double r : rates) ss += (r - res.mean_rate) * (r - res.mean_rate);
    res.stderr_rate = std::sqrt(ss / (opts.trials - 1) / opts.trials);
  }
  return res;
}

SingleUserResult simulate_single_user(const SubsetRequestDistribution& requests, int n_files,
                                      double memory, int file_bits, int trials,
                                      std::uint64_t seed) {
  if (file_bits < 1) throw std::invalid_argument("simulate_single_user: file_bits must be >= 1");
  if (trials < 1) throw std::invalid_argument("simulate_single_user: trials must be >= 1");
  if (memory < 0.0 || memory > n_files)
    throw std::domain_error("simulate_single_user: memory outside [0, N]");

  const InclusionProfile profile = inclusion_marginals(requests, n_files);
  const int whole = std::min(static_cast<int>(std::floor(memory)), n_files);
  const int partial = whole < n_files ? forgiving_floor((memory - whole) * file_bits) : 0;

  // bits of each file the cache still misses, by label
  std::vector<long> missing(n_files);
  for (int rank = 0; rank < n_files; ++rank) {
    const long miss = rank < whole ? 0 : rank == whole ? file_bits - partial : file_bits;
    missing[profile.order[rank]] = miss;
  }

  std::vector<double> cum(requests.support().size());
  double acc = 0.0;
  for (std::size_t i = 0; i < cum.size(); ++i) {
    acc += requests.support()[i].second;
    cum[i] = acc;
  }

  SingleUserResult res;
  res.trials = trials;
  res.analytic_rate =
      prefix_cache_rate(profile, whole + static_cast<double>(partial) / file_bits);

  std::vector<double> rates(trials);
  for (int t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_stream(seed, t));
    const double u = rng.next_double() * cum.back();
    const auto idx = std::min<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin(), cum.size() - 1);
    std::uint64_t mask = requests.support()[idx].first;
    long sent = 0;
    while (mask) {
      sent += missing[std::countr_zero(mask)];
      mask &= mask - 1;
    }
    rates[t] = static_cast<double>(sent) / file_bits;
  }

  res.mean_rate = std::accumulate(rates.begin(), rates.end(), 0.0) / trials;
  if (trials > 1) {
    double ss = 0.0;
    for (double r : rates) ss += (r - res.mean_rate) * (r - res.mean_rate);
    res.stderr_rate = std::sqrt(ss / (trials - 1) / trials);
  }
  return res;
}

}  // namespace ccbounds::scheme
