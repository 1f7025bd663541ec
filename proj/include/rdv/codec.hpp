#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rdv/bitstream.hpp"
#include "rdv/errors.hpp"
#include "rdv/frame.hpp"
#include "rdv/frame_codec.hpp"
#include "rdv/resample.hpp"
#include "rdv/schedule.hpp"
#include "rdv/transform.hpp"

namespace rdv {

// One candidate configuration for coding a sequence.
struct CodingChoice {
  int intra_period = 32;
  int gop_size = 8;
  int quality = 5;  // 1..8
  bool downsample = false;

  friend bool operator==(const CodingChoice&, const CodingChoice&) = default;
  // Competition tie-break order.
  friend bool operator<(const CodingChoice& a, const CodingChoice& b) {
    auto key = [](const CodingChoice& c) {
      return std::tuple(c.intra_period, c.gop_size, c.quality, c.downsample);
    };
    return key(a) < key(b);
  }
};

struct SequenceEncodeResult {
  std::vector<std::uint8_t> stream;   // complete container bytes
  std::vector<FrameStats> stats;      // per frame, in coding order
  std::vector<MotionField> motion;    // per frame, in coding order
  Sequence recon;                     // decoder output at original resolution
  std::uint64_t total_bits = 0;
};

// Closed-loop encode of a whole sequence under one coding choice. Every frame
// gets its own coder session and fresh contexts, so payloads decode
// independently given the references.
inline SequenceEncodeResult encode_sequence(const Sequence& input,
                                            const CodingChoice& choice) {
  if (input.empty()) throw ConfigError("cannot encode an empty sequence");
  input.validate();
  if (input.width() > 0xFFFF || input.height() > 0xFFFF)
    throw ConfigError("geometry exceeds 16-bit header fields");
  if (static_cast<std::uint64_t>(input.frames.size()) > 0xFFFFFFFFull)
    throw ConfigError("too many frames");
  if (input.fps.num == 0 || input.fps.den == 0)
    throw ConfigError("sequence needs a valid frame rate");
  if (input.fps.num > 0xFFFF || input.fps.den > 0xFFFF)
    throw ConfigError("frame rate exceeds 16-bit header fields");
  if (choice.intra_period > 0xFFFF || choice.gop_size > 0xFF)
    throw ConfigError("frame structure exceeds header fields");

  QualityLevel q = quality_level(choice.quality);

  std::vector<Frame> coded_input;
  coded_input.reserve(input.frames.size());
  if (choice.downsample) {
    for (const Frame& f : input.frames) coded_input.push_back(downsample2x(f));
  } else {
    coded_input = input.frames;
  }

  int n = static_cast<int>(coded_input.size());
  FrameSchedule schedule =
      build_schedule(n, choice.intra_period, choice.gop_size);

  StreamHeader header;
  header.width = static_cast<std::uint16_t>(input.width());
  header.height = static_cast<std::uint16_t>(input.height());
  header.frame_count = static_cast<std::uint32_t>(n);
  header.fps_num = static_cast<std::uint16_t>(input.fps.num);
  header.fps_den = static_cast<std::uint16_t>(input.fps.den);
  header.intra_period = static_cast<std::uint16_t>(choice.intra_period);
  header.gop_size = static_cast<std::uint8_t>(choice.gop_size);
  header.quality_index = static_cast<std::uint8_t>(choice.quality);
  header.downsample_flag = choice.downsample ? 1 : 0;

  SequenceEncodeResult result;
  std::vector<FramePayload> payloads;
  payloads.reserve(static_cast<std::size_t>(n));
  std::map<int, Frame> recon_by_display;

  for (const ScheduleEntry& entry : schedule.entries) {
    const Frame& target = coded_input[static_cast<std::size_t>(entry.display_index)];
    const Frame* past =
        entry.ref_past ? &recon_by_display.at(*entry.ref_past) : nullptr;
    const Frame* future =
        entry.ref_future ? &recon_by_display.at(*entry.ref_future) : nullptr;

    RangeEncoder coder;
    CodecContexts ctx;
    FrameEncodeOutput frame_out =
        encode_frame(target, entry, past, future, q, coder, ctx);
    coder.finish();

    FramePayload payload;
    payload.coding_order_index = static_cast<std::uint32_t>(entry.coding_order);
    payload.bytes = coder.take_bytes();
    payloads.push_back(std::move(payload));

    result.stats.push_back(frame_out.stats);
    result.motion.push_back(std::move(frame_out.motion));
    frame_out.recon.display_index = entry.display_index;
    recon_by_display.emplace(entry.display_index, std::move(frame_out.recon));
  }

  result.stream = serialize_stream(header, payloads);
  result.total_bits = static_cast<std::uint64_t>(result.stream.size()) * 8;

  result.recon.fps = input.fps;
  result.recon.name = input.name;
  for (int d = 0; d < n; ++d) {
    Frame& r = recon_by_display.at(d);
    if (choice.downsample) {
      result.recon.frames.push_back(upsample2x(r, input.width(), input.height()));
      result.recon.frames.back().display_index = d;
    } else {
      result.recon.frames.push_back(std::move(r));
    }
  }
  return result;
}

// Decodes a complete container back to a displayable sequence. Needs nothing
// beyond the bytes themselves.
inline Sequence decode_stream(std::span<const std::uint8_t> bytes,
                              const std::string& name = "") {
  auto [header, payloads] = parse_stream(bytes);
  QualityLevel q = quality_level(header.quality_index);
  int cw = header.coded_width();
  int ch = header.coded_height();

  FrameSchedule schedule;
  try {
    schedule = build_schedule(static_cast<int>(header.frame_count),
                              header.intra_period, header.gop_size);
  } catch (const ConfigError& e) {
    throw ParseError(std::string("invalid frame structure: ") + e.what());
  }

  std::map<int, Frame> recon_by_display;
  for (const ScheduleEntry& entry : schedule.entries) {
    const FramePayload& payload =
        payloads[static_cast<std::size_t>(entry.coding_order)];
    const Frame* past =
        entry.ref_past ? &recon_by_display.at(*entry.ref_past) : nullptr;
    const Frame* future =
        entry.ref_future ? &recon_by_display.at(*entry.ref_future) : nullptr;

    RangeDecoder dec(payload.bytes);
    CodecContexts ctx;
    Frame recon = decode_frame(entry, cw, ch, past, future, q, dec, ctx);
    recon_by_display.emplace(entry.display_index, std::move(recon));
  }

  Sequence out;
  out.fps = {header.fps_num, header.fps_den};
  out.name = name;
  for (int d = 0; d < static_cast<int>(header.frame_count); ++d) {
    Frame& r = recon_by_display.at(d);
    if (header.downsample_flag) {
      out.frames.push_back(upsample2x(r, header.width, header.height));
      out.frames.back().display_index = d;
    } else {
      out.frames.push_back(std::move(r));
    }
  }
  return out;
}

inline Sequence decode_stream_file(const std::string& path,
                                   const std::string& name = "") {
  std::vector<std::uint8_t> bytes = read_file_bytes(path);
  return decode_stream(bytes, name);
}

}  // namespace rdv
