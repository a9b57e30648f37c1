#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "pqlab/error.hpp"
#include "pqlab/video.hpp"

namespace pqlab {

// Frame-sequential planar YCbCr, Y then Cb then Cr. 8-bit data is one byte
// per sample; 10-bit data is two bytes little endian.
inline size_t bytes_per_sample(int bit_depth) { return bit_depth > 8 ? 2 : 1; }

inline size_t frame_byte_size(const SequenceInfo& info) {
  const size_t luma = static_cast<size_t>(info.width) * info.height;
  const size_t chroma = static_cast<size_t>(info.chroma_width()) * info.chroma_height();
  return (luma + 2 * chroma) * bytes_per_sample(info.bit_depth);
}

namespace detail {

inline void read_plane(std::istream& in, Plane& plane) {
  const size_t count = plane.samples.size();
  if (plane.bit_depth > 8) {
    std::vector<uint8_t> buf(count * 2);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    const uint16_t max = plane.max_value();
    for (size_t i = 0; i < count; ++i) {
      const uint16_t v = static_cast<uint16_t>(buf[2 * i] | (buf[2 * i + 1] << 8));
      if (v > max) {
        throw_format("sample value " + std::to_string(v) + " exceeds " + std::to_string(max) +
                     " for bit depth " + std::to_string(plane.bit_depth));
      }
      plane.samples[i] = v;
    }
  } else {
    std::vector<uint8_t> buf(count);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    for (size_t i = 0; i < count; ++i) plane.samples[i] = buf[i];
  }
}

inline void write_plane(std::ostream& out, const Plane& plane) {
  if (plane.bit_depth > 8) {
    std::vector<uint8_t> buf(plane.samples.size() * 2);
    for (size_t i = 0; i < plane.samples.size(); ++i) {
      buf[2 * i] = static_cast<uint8_t>(plane.samples[i] & 0xFF);
      buf[2 * i + 1] = static_cast<uint8_t>(plane.samples[i] >> 8);
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  } else {
    std::vector<uint8_t> buf(plane.samples.size());
    for (size_t i = 0; i < plane.samples.size(); ++i) buf[i] = static_cast<uint8_t>(plane.samples[i]);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  }
}

}  // namespace detail

inline FrameSequence load_raw(const std::string& path, const SequenceInfo& info) {
  if (info.width <= 0 || info.height <= 0) throw_config("invalid frame geometry");
  if (info.bit_depth != 8 && info.bit_depth != 10) throw_config("bit depth must be 8 or 10");

  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec) throw_io("cannot stat '" + path + "': " + ec.message());

  const size_t fsize = frame_byte_size(info);
  if (file_size % fsize != 0) {
    throw_format("file size " + std::to_string(file_size) + " is not a multiple of the frame size " +
                 std::to_string(fsize));
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open '" + path + "' for reading");

  FrameSequence seq;
  seq.info = info;
  const size_t frames = file_size / fsize;
  seq.frames.reserve(frames);
  for (size_t i = 0; i < frames; ++i) {
    Frame f = make_frame(info);
    detail::read_plane(in, f.y);
    detail::read_plane(in, f.cb);
    detail::read_plane(in, f.cr);
    if (!in) throw_io("short read from '" + path + "'");
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

inline void write_raw(const FrameSequence& seq, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot open '" + path + "' for writing");
  for (const Frame& f : seq.frames) {
    detail::write_plane(out, f.y);
    detail::write_plane(out, f.cb);
    detail::write_plane(out, f.cr);
  }
  out.flush();
  if (!out) throw_io("write failure on '" + path + "'");
}

}  // namespace pqlab
