#pragma once

#include <cstdint>
#include <vector>

#include "qkdsim/types.hpp"

namespace qkdsim {

/// Key-pool state of one link as disseminated in routing messages.
/// Four 32-bit fields on the wire (128 bits).
struct KeyStateAd {
  double cur_bits = 0.0;
  double max_bits = 0.0;
  double gen_rate_bps = 0.0;
  double measured_consumption_bps = 0.0;

  friend bool operator==(const KeyStateAd&, const KeyStateAd&) = default;
};

enum class LinkCode : std::uint8_t { Heard = 0, Symmetric = 1, Mpr = 2 };

struct HelloEntry {
  NodeId neighbor;
  LinkCode code;
};

/// Wire layout used for key accounting (bits):
///   header 128 | 32 per neighbor entry | 128 KeyStateAd of the emitting link
struct HelloMessage {
  NodeId originator = 0;
  LinkId link = kNoLink;
  Seconds origin_time = 0.0;
  std::vector<HelloEntry> neighbors;
  KeyStateAd ad;

  static constexpr std::uint64_t kHeaderBits = 128;
  static constexpr std::uint64_t kEntryBits = 32;
  static constexpr std::uint64_t kAdBits = 128;

  std::uint64_t size_bits() const { return kHeaderBits + kEntryBits * neighbors.size() + kAdBits; }
};

struct LinkAd {
  LinkId link;
  KeyStateAd ad;
};

/// Wire layout used for key accounting (bits):
///   header 128 | 32 per MPR selector | 128 per advertised link state
///
/// `seq` is the per-originator message sequence number used for duplicate
/// suppression; `ansn` versions the selector set.
struct TcMessage {
  NodeId originator = 0;
  std::uint64_t seq = 0;
  std::uint64_t ansn = 0;
  Seconds origin_time = 0.0;
  std::vector<NodeId> selectors;
  std::vector<LinkAd> ads;

  static constexpr std::uint64_t kHeaderBits = 128;
  static constexpr std::uint64_t kSelectorBits = 32;
  static constexpr std::uint64_t kAdBits = 128;

  std::uint64_t size_bits() const {
    return kHeaderBits + kSelectorBits * selectors.size() + kAdBits * ads.size();
  }
};

/// Canonical little-endian byte encodings. Doubles are written as their IEEE
/// bit patterns so equal messages always encode identically.
std::vector<std::uint8_t> encode(const HelloMessage& m);
std::vector<std::uint8_t> encode(const TcMessage& m);

}  // namespace qkdsim
