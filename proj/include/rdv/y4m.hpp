#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rdv/errors.hpp"
#include "rdv/frame.hpp"

namespace rdv {

namespace detail {

inline std::string read_line(std::istream& in, std::size_t max_len) {
  std::string line;
  char c;
  while (in.get(c)) {
    if (c == '\n') return line;
    line.push_back(c);
    if (line.size() > max_len) throw ParseError("header line too long");
  }
  throw TruncationError("input ended inside a header line");
}

inline bool read_plane(std::istream& in, std::vector<std::uint8_t>& plane) {
  in.read(reinterpret_cast<char*>(plane.data()),
          static_cast<std::streamsize>(plane.size()));
  return static_cast<std::size_t>(in.gcount()) == plane.size();
}

}  // namespace detail

// Parses a YUV4MPEG2 stream. Only 8-bit 4:2:0 content is accepted.
inline Sequence load_y4m(std::istream& in, const std::string& name = "") {
  std::string header = detail::read_line(in, 1024);
  std::istringstream tokens(header);
  std::string magic;
  tokens >> magic;
  if (magic != "YUV4MPEG2") throw ParseError("not a YUV4MPEG2 stream");

  int width = 0, height = 0;
  Rational fps{0, 0};
  bool chroma_420 = true;
  std::string tok;
  while (tokens >> tok) {
    if (tok.empty()) continue;
    char tag = tok[0];
    std::string val = tok.substr(1);
    try {
      switch (tag) {
        case 'W': width = std::stoi(val); break;
        case 'H': height = std::stoi(val); break;
        case 'F': {
          std::size_t colon = val.find(':');
          if (colon == std::string::npos) throw ParseError("bad frame rate");
          fps.num = static_cast<std::uint32_t>(std::stoul(val.substr(0, colon)));
          fps.den = static_cast<std::uint32_t>(std::stoul(val.substr(colon + 1)));
          break;
        }
        case 'C': chroma_420 = val.rfind("420", 0) == 0; break;
        default: break;  // interlace, aspect, extensions: ignored
      }
    } catch (const std::invalid_argument&) {
      throw ParseError("malformed Y4M header token: " + tok);
    } catch (const std::out_of_range&) {
      throw ParseError("Y4M header value out of range: " + tok);
    }
  }
  if (!chroma_420) throw UnsupportedFormat("only C420 chroma is supported");
  if (width <= 0 || height <= 0) throw ParseError("missing or invalid W/H");
  if (fps.num == 0 || fps.den == 0) throw ParseError("missing or invalid F");

  Sequence seq;
  seq.fps = fps;
  seq.name = name;
  int index = 0;
  while (true) {
    int peek = in.peek();
    if (peek == EOF) break;
    std::string frame_line = detail::read_line(in, 1024);
    if (frame_line.rfind("FRAME", 0) != 0)
      throw ParseError("expected FRAME marker");
    Frame f(width, height, index++);
    if (!detail::read_plane(in, f.y) || !detail::read_plane(in, f.cb) ||
        !detail::read_plane(in, f.cr))
      throw TruncationError("frame payload truncated");
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

inline Sequence load_y4m(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::size_t slash = path.find_last_of('/');
  return load_y4m(in, slash == std::string::npos ? path : path.substr(slash + 1));
}

inline void store_y4m(const Sequence& seq, std::ostream& out) {
  if (seq.empty()) throw ConfigError("refusing to write an empty sequence");
  seq.validate();
  out << "YUV4MPEG2 W" << seq.width() << " H" << seq.height() << " F"
      << seq.fps.num << ":" << seq.fps.den << " Ip A1:1 C420\n";
  for (const Frame& f : seq.frames) {
    out << "FRAME\n";
    out.write(reinterpret_cast<const char*>(f.y.data()),
              static_cast<std::streamsize>(f.y.size()));
    out.write(reinterpret_cast<const char*>(f.cb.data()),
              static_cast<std::streamsize>(f.cb.size()));
    out.write(reinterpret_cast<const char*>(f.cr.data()),
              static_cast<std::streamsize>(f.cr.size()));
  }
  if (!out) throw IoError("write failure");
}

inline void store_y4m(const Sequence& seq, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  store_y4m(seq, out);
  out.flush();
  if (!out) throw IoError("write failure on " + path);
}

// Headerless planar I420. Frame count is inferred from the file size and must
// cover expected_frames when that is non-negative.
inline Sequence load_raw_i420(const std::string& path, int width, int height,
                              Rational fps, int expected_frames = -1,
                              const std::string& name = "") {
  if (width <= 0 || height <= 0) throw ConfigError("raw input needs positive W/H");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  std::size_t luma = static_cast<std::size_t>(width) * height;
  std::size_t chroma = static_cast<std::size_t>(chroma_dim(width)) * chroma_dim(height);
  std::size_t frame_bytes = luma + 2 * chroma;

  in.seekg(0, std::ios::end);
  std::uint64_t total = static_cast<std::uint64_t>(in.tellg());
  in.seekg(0, std::ios::beg);

  if (total % frame_bytes != 0)
    throw TruncationError("raw file size is not a whole number of frames");
  std::uint64_t count = total / frame_bytes;
  if (expected_frames >= 0 && count < static_cast<std::uint64_t>(expected_frames))
    throw TruncationError("raw file holds fewer frames than declared");
  if (count == 0) throw TruncationError("raw file holds no complete frame");
  if (expected_frames >= 0) count = static_cast<std::uint64_t>(expected_frames);

  Sequence seq;
  seq.fps = fps;
  seq.name = name.empty() ? path : name;
  for (std::uint64_t i = 0; i < count; ++i) {
    Frame f(width, height, static_cast<int>(i));
    if (!detail::read_plane(in, f.y) || !detail::read_plane(in, f.cb) ||
        !detail::read_plane(in, f.cr))
      throw TruncationError("raw frame payload truncated");
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

}  // namespace rdv
