// include/asrpipe/util/wav.hpp

// Copyright 2026 asrpipe authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASRPIPE_UTIL_WAV_HPP
#define ASRPIPE_UTIL_WAV_HPP

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "asrpipe/error.hpp"

namespace asrpipe {

// RIFF/WAVE, PCM 16-bit little-endian, mono. An optional LIST/INFO ICMT
// chunk carries a UTF-8 comment (the mock endpoints store the label there).
struct WavData {
  std::uint32_t sample_rate = 16000;
  std::vector<std::int16_t> samples;
  std::string comment;

  double duration_s() const {
    return sample_rate == 0 ? 0.0
                            : static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
};

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

inline std::uint32_t get_u32(std::string_view s, std::size_t off) {
  return static_cast<std::uint8_t>(s[off]) | (static_cast<std::uint8_t>(s[off + 1]) << 8) |
         (static_cast<std::uint8_t>(s[off + 2]) << 16) |
         (static_cast<std::uint32_t>(static_cast<std::uint8_t>(s[off + 3])) << 24);
}

inline std::uint16_t get_u16(std::string_view s, std::size_t off) {
  return static_cast<std::uint16_t>(static_cast<std::uint8_t>(s[off]) |
                                    (static_cast<std::uint8_t>(s[off + 1]) << 8));
}

}  // namespace detail

inline std::string encode_wav(const WavData& wav) {
  std::string body;

  // fmt
  body += "fmt ";
  detail::put_u32(body, 16);
  detail::put_u16(body, 1);  // PCM
  detail::put_u16(body, 1);  // mono
  detail::put_u32(body, wav.sample_rate);
  detail::put_u32(body, wav.sample_rate * 2);
  detail::put_u16(body, 2);
  detail::put_u16(body, 16);

  // LIST/INFO with an ICMT comment
  if (!wav.comment.empty()) {
    std::string comment = wav.comment;
    comment.push_back('\0');
    if (comment.size() % 2 != 0) comment.push_back('\0');
    body += "LIST";
    detail::put_u32(body, static_cast<std::uint32_t>(4 + 8 + comment.size()));
    body += "INFO";
    body += "ICMT";
    detail::put_u32(body, static_cast<std::uint32_t>(comment.size()));
    body += comment;
  }

  // data
  body += "data";
  detail::put_u32(body, static_cast<std::uint32_t>(wav.samples.size() * 2));
  for (std::int16_t s : wav.samples)
    detail::put_u16(body, static_cast<std::uint16_t>(s));

  std::string out;
  out += "RIFF";
  detail::put_u32(out, static_cast<std::uint32_t>(4 + body.size()));
  out += "WAVE";
  out += body;
  return out;
}

inline WavData decode_wav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE")
    throw InputError("not a RIFF/WAVE file");
  WavData wav;
  wav.sample_rate = 0;
  std::uint16_t bits = 0, channels = 0;

  std::size_t off = 12;
  while (off + 8 <= bytes.size()) {
    std::string_view tag = bytes.substr(off, 4);
    std::uint32_t size = detail::get_u32(bytes, off + 4);
    std::size_t payload = off + 8;
    if (payload + size > bytes.size()) throw InputError("truncated WAVE chunk");
    if (tag == "fmt ") {
      if (size < 16) throw InputError("malformed fmt chunk");
      channels = detail::get_u16(bytes, payload + 2);
      wav.sample_rate = detail::get_u32(bytes, payload + 4);
      bits = detail::get_u16(bytes, payload + 14);
    } else if (tag == "LIST" && size >= 4 && bytes.substr(payload, 4) == "INFO") {
      std::size_t p = payload + 4;
      while (p + 8 <= payload + size) {
        std::string_view sub = bytes.substr(p, 4);
        std::uint32_t sub_size = detail::get_u32(bytes, p + 4);
        if (p + 8 + sub_size > payload + size) break;
        if (sub == "ICMT") {
          std::string_view c = bytes.substr(p + 8, sub_size);
          while (!c.empty() && c.back() == '\0') c.remove_suffix(1);
          wav.comment.assign(c);
        }
        p += 8 + sub_size + (sub_size % 2);
      }
    } else if (tag == "data") {
      wav.samples.resize(size / 2);
      for (std::size_t i = 0; i < wav.samples.size(); ++i)
        wav.samples[i] = static_cast<std::int16_t>(detail::get_u16(bytes, payload + 2 * i));
    }
    off = payload + size + (size % 2);
  }
  if (wav.sample_rate == 0 || bits != 16 || channels != 1)
    throw InputError("expected 16-bit mono PCM WAVE");
  return wav;
}

inline void write_wav_file(const std::filesystem::path& path, const WavData& wav) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write audio file: " + path.string());
  std::string bytes = encode_wav(wav);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to audio file: " + path.string());
}

inline WavData read_wav_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open audio file: " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

}  // namespace asrpipe

#endif  // ASRPIPE_UTIL_WAV_HPP
