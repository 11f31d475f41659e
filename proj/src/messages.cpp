#include "qkdsim/messages.hpp"

#include <bit>

namespace qkdsim {
namespace {

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void ad(const KeyStateAd& a) {
    f64(a.cur_bits);
    f64(a.max_bits);
    f64(a.gen_rate_bps);
    f64(a.measured_consumption_bps);
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

}  // namespace

std::vector<std::uint8_t> encode(const HelloMessage& m) {
  Writer w;
  w.u8(1);
  w.u32(m.originator);
  w.u32(m.link);
  w.f64(m.origin_time);
  w.u32(static_cast<std::uint32_t>(m.neighbors.size()));
  for (const auto& e : m.neighbors) {
    w.u32(e.neighbor);
    w.u8(static_cast<std::uint8_t>(e.code));
  }
  w.ad(m.ad);
  return w.take();
}

std::vector<std::uint8_t> encode(const TcMessage& m) {
  Writer w;
  w.u8(2);
  w.u32(m.originator);
  w.u64(m.seq);
  w.u64(m.ansn);
  w.f64(m.origin_time);
  w.u32(static_cast<std::uint32_t>(m.selectors.size()));
  for (NodeId s : m.selectors) w.u32(s);
  w.u32(static_cast<std::uint32_t>(m.ads.size()));
  for (const auto& la : m.ads) {
    w.u32(la.link);
    w.ad(la.ad);
  }
  return w.take();
}

}  // namespace qkdsim
