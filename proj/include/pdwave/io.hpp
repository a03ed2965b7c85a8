#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdwave/types.hpp"

namespace pdwave {

/// Shortest decimal form that round-trips a double (17 significant digits).
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

class Sha1 {
 public:
  void update(const void* data, std::size_t len) {
    const auto* p = static_cast<const uint8_t*>(data);
    total_ += len;
    while (len > 0) {
      const std::size_t take = std::min<std::size_t>(64 - fill_, len);
      std::memcpy(buf_.data() + fill_, p, take);
      fill_ += take;
      p += take;
      len -= take;
      if (fill_ == 64) {
        process(buf_.data());
        fill_ = 0;
      }
    }
  }

  std::string hex_digest() {
    const uint64_t bits = total_ * 8;
    uint8_t pad = 0x80;
    update(&pad, 1);
    const uint8_t zero = 0;
    while (fill_ != 56) update(&zero, 1);
    uint8_t len_be[8];
    for (int i = 0; i < 8; ++i) len_be[i] = static_cast<uint8_t>(bits >> (56 - 8 * i));
    update(len_be, 8);
    char out[41];
    for (int i = 0; i < 5; ++i) std::snprintf(out + 8 * i, 9, "%08x", h_[i]);
    return std::string(out, 40);
  }

 private:
  static uint32_t rol(uint32_t v, int s) { return (v << s) | (v >> (32 - s)); }

  void process(const uint8_t* block) {
    uint32_t w[80];
    for (int i = 0; i < 16; ++i) {
      w[i] = (uint32_t(block[4 * i]) << 24) | (uint32_t(block[4 * i + 1]) << 16) |
             (uint32_t(block[4 * i + 2]) << 8) | uint32_t(block[4 * i + 3]);
    }
    for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
    uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3], e = h_[4];
    for (int i = 0; i < 80; ++i) {
      uint32_t f, k;
      if (i < 20) {
        f = (b & c) | (~b & d);
        k = 0x5A827999;
      } else if (i < 40) {
        f = b ^ c ^ d;
        k = 0x6ED9EBA1;
      } else if (i < 60) {
        f = (b & c) | (b & d) | (c & d);
        k = 0x8F1BBCDC;
      } else {
        f = b ^ c ^ d;
        k = 0xCA62C1D6;
      }
      const uint32_t tmp = rol(a, 5) + f + e + k + w[i];
      e = d;
      d = c;
      c = rol(b, 30);
      b = a;
      a = tmp;
    }
    h_[0] += a;
    h_[1] += b;
    h_[2] += c;
    h_[3] += d;
    h_[4] += e;
  }

  std::array<uint32_t, 5> h_ = {0x67452301, 0xEFCDAB89, 0x98BADCFE, 0x10325476, 0xC3D2E1F0};
  std::array<uint8_t, 64> buf_{};
  std::size_t fill_ = 0;
  uint64_t total_ = 0;
};

}  // namespace detail

inline std::string sha1_hex(std::string_view data) {
  detail::Sha1 h;
  h.update(data.data(), data.size());
  return h.hex_digest();
}

/// Content hash the way git hashes a blob: sha1("blob <size>\0" + content).
inline std::string git_blob_sha1(std::string_view content) {
  detail::Sha1 h;
  const std::string header = "blob " + std::to_string(content.size());
  h.update(header.data(), header.size() + 1);  // includes the NUL
  h.update(content.data(), content.size());
  return h.hex_digest();
}

/// CSV document with "# key = value" metadata lines ahead of the column row.
class Csv {
 public:
  void meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
  void meta(const std::string& key, double value) { meta_.emplace_back(key, format_g17(value)); }
  void meta(const std::string& key, uint64_t value) { meta_.emplace_back(key, std::to_string(value)); }
  void meta(const std::string& key, int value) { meta_.emplace_back(key, std::to_string(value)); }

  void columns(const std::vector<std::string>& names) {
    header_.clear();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (i) header_ += ',';
      header_ += names[i];
    }
  }

  class Row {
   public:
    explicit Row(std::string& line) : line_(line) {}
    Row& cell(const std::string& v) {
      if (!line_.empty()) line_ += ',';
      line_ += v;
      return *this;
    }
    Row& cell(double v) { return cell(format_g17(v)); }
    Row& cell(int v) { return cell(std::to_string(v)); }
    Row& cell(long long v) { return cell(std::to_string(v)); }

   private:
    std::string& line_;
  };

  Row row() {
    rows_.emplace_back();
    return Row(rows_.back());
  }

  std::string str() const {
    std::string out;
    for (const auto& [k, v] : meta_) out += "# " + k + " = " + v + "\n";
    out += header_ + "\n";
    for (const std::string& r : rows_) out += r + "\n";
    return out;
  }

  const std::vector<std::pair<std::string, std::string>>& meta_entries() const { return meta_; }

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::string header_;
  std::vector<std::string> rows_;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  detail::require(out.good(), "write_text_file: cannot open output file");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  detail::require(out.good(), "write_text_file: write failed");
}

inline void write_binary_file(const std::filesystem::path& path, const void* data,
                              std::size_t bytes, const std::string& text_header) {
  std::ofstream out(path, std::ios::binary);
  detail::require(out.good(), "write_binary_file: cannot open output file");
  out.write(text_header.data(), static_cast<std::streamsize>(text_header.size()));
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
  detail::require(out.good(), "write_binary_file: write failed");
}

}  // namespace pdwave
