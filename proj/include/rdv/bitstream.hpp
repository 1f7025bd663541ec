#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rdv/errors.hpp"
#include "rdv/schedule.hpp"

namespace rdv {

// Fixed 22-byte stream header, little-endian throughout. Width and height are
// the ORIGINAL dimensions; when downsample_flag is set the coded pictures are
// (width/2, height/2) floored and the decoder upsamples back.
struct StreamHeader {
  std::uint8_t version = 1;
  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint32_t frame_count = 0;
  std::uint16_t fps_num = 25;
  std::uint16_t fps_den = 1;
  std::uint16_t intra_period = 1;
  std::uint8_t gop_size = 1;
  std::uint8_t quality_index = 1;
  std::uint8_t downsample_flag = 0;

  int coded_width() const { return downsample_flag ? width / 2 : width; }
  int coded_height() const { return downsample_flag ? height / 2 : height; }
};

constexpr std::size_t kStreamHeaderBytes = 22;
constexpr char kStreamMagic[4] = {'R', 'D', 'V', '1'};

struct FramePayload {
  std::uint32_t coding_order_index = 0;
  std::vector<std::uint8_t> bytes;
};

namespace detail {

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::vector<std::uint8_t> bytes(std::size_t n) {
    need(n);
    std::vector<std::uint8_t> v(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                data_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return v;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) {
    if (data_.size() - pos_ < n) throw TruncationError("stream truncated");
  }
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline void validate_header(const StreamHeader& h) {
  if (h.version != 1) throw VersionError("unsupported stream version");
  if (h.width == 0 || h.height == 0) throw ParseError("empty geometry");
  if (h.quality_index < 1 || h.quality_index > 8)
    throw ParseError("quality index outside [1,8]");
  if (h.gop_size < 1 || h.gop_size > h.intra_period)
    throw ParseError("gop_size must be in [1, intra_period]");
  if (!is_power_of_two(h.gop_size)) throw ParseError("gop_size must be a power of two");
  if (h.downsample_flag > 1) throw ParseError("bad downsample flag");
  if (h.fps_num == 0 || h.fps_den == 0) throw ParseError("bad frame rate");
  if (h.downsample_flag && (h.width < 2 || h.height < 2))
    throw ParseError("downsampled stream needs at least 2x2 source");
}

inline std::vector<std::uint8_t> serialize_stream(
    const StreamHeader& header, const std::vector<FramePayload>& payloads) {
  validate_header(header);
  if (payloads.size() != header.frame_count)
    throw ConfigError("payload count does not match header frame_count");
  std::vector<std::uint8_t> out;
  out.reserve(kStreamHeaderBytes);
  out.insert(out.end(), kStreamMagic, kStreamMagic + 4);
  out.push_back(header.version);
  detail::put_u16(out, header.width);
  detail::put_u16(out, header.height);
  detail::put_u32(out, header.frame_count);
  detail::put_u16(out, header.fps_num);
  detail::put_u16(out, header.fps_den);
  detail::put_u16(out, header.intra_period);
  out.push_back(header.gop_size);
  out.push_back(header.quality_index);
  out.push_back(header.downsample_flag);
  for (const FramePayload& p : payloads) {
    detail::put_u32(out, p.coding_order_index);
    detail::put_u32(out, static_cast<std::uint32_t>(p.bytes.size()));
    out.insert(out.end(), p.bytes.begin(), p.bytes.end());
  }
  return out;
}

inline std::pair<StreamHeader, std::vector<FramePayload>> parse_stream(
    std::span<const std::uint8_t> data) {
  detail::ByteReader r(data);
  std::uint8_t magic[4];
  for (auto& m : magic) m = r.u8();
  if (std::memcmp(magic, kStreamMagic, 4) != 0)
    throw ParseError("not an RDV1 stream");
  StreamHeader h;
  h.version = r.u8();
  if (h.version != 1) throw VersionError("unsupported stream version");
  h.width = r.u16();
  h.height = r.u16();
  h.frame_count = r.u32();
  h.fps_num = r.u16();
  h.fps_den = r.u16();
  h.intra_period = r.u16();
  h.gop_size = r.u8();
  h.quality_index = r.u8();
  h.downsample_flag = r.u8();
  validate_header(h);

  std::vector<FramePayload> payloads;
  payloads.reserve(h.frame_count);
  for (std::uint32_t i = 0; i < h.frame_count; ++i) {
    FramePayload p;
    p.coding_order_index = r.u32();
    if (p.coding_order_index != i)
      throw ParseError("frame payloads out of coding order");
    std::uint32_t len = r.u32();
    p.bytes = r.bytes(len);
    payloads.push_back(std::move(p));
  }
  if (r.remaining() != 0) throw ParseError("trailing bytes after last payload");
  return {h, std::move(payloads)};
}

inline void write_stream(const StreamHeader& header,
                         const std::vector<FramePayload>& payloads,
                         const std::string& path) {
  std::vector<std::uint8_t> bytes = serialize_stream(header, payloads);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failure on " + path);
}

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  in.seekg(0, std::ios::end);
  std::streamoff size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!in) throw IoError("read failure on " + path);
  return bytes;
}

inline std::pair<StreamHeader, std::vector<FramePayload>> parse_stream_file(
    const std::string& path) {
  std::vector<std::uint8_t> bytes = read_file_bytes(path);
  return parse_stream(bytes);
}

}  // namespace rdv
