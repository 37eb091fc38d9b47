#include "dmask/pnm.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace dmask {

namespace {

struct ByteReader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;

  bool eof() const { return pos >= bytes.size(); }
  int peek() const { return eof() ? -1 : bytes[pos]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw PnmError(what, pos);
  }

  static bool is_ws(int c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
           c == '\f';
  }

  void skip_ws_and_comments() {
    for (;;) {
      const int c = peek();
      if (c == '#') {
        while (!eof() && bytes[pos] != '\n') ++pos;
      } else if (is_ws(c)) {
        ++pos;
      } else {
        return;
      }
    }
  }

  long read_uint(const char* what) {
    skip_ws_and_comments();
    if (eof() || peek() < '0' || peek() > '9')
      fail(std::string("expected ") + what);
    long v = 0;
    while (!eof() && peek() >= '0' && peek() <= '9') {
      v = v * 10 + (bytes[pos] - '0');
      if (v > std::numeric_limits<int>::max()) fail(std::string(what) + " overflows");
      ++pos;
    }
    return v;
  }

  // The header ends with exactly one whitespace byte before the payload.
  void expect_single_ws() {
    if (eof() || !is_ws(peek())) fail("expected whitespace before payload");
    ++pos;
  }
};

std::uint8_t quantise(double v) {
  const long q = std::lround(v * 255.0);
  return static_cast<std::uint8_t>(q < 0 ? 0 : (q > 255 ? 255 : q));
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

void append_header(std::vector<std::uint8_t>& out, const char* magic, int w,
                   int h, bool with_maxval) {
  char buf[64];
  const int len = with_maxval ? std::snprintf(buf, sizeof buf, "%s\n%d %d\n255\n", magic, w, h)
                              : std::snprintf(buf, sizeof buf, "%s\n%d %d\n", magic, w, h);
  out.insert(out.end(), buf, buf + len);
}

}  // namespace

Image load_pnm(std::span<const std::uint8_t> bytes) {
  ByteReader r{bytes};
  if (r.eof() || r.bytes[0] != 'P') r.fail("missing PNM magic");
  if (bytes.size() < 2 || (bytes[1] != '5' && bytes[1] != '6'))
    throw PnmError("unsupported format, want P5 or P6", 1);
  const int channels = bytes[1] == '5' ? 1 : 3;
  r.pos = 2;

  const long w = r.read_uint("width");
  const long h = r.read_uint("height");
  if (w < 1 || h < 1) r.fail("dimensions must be positive");
  const long maxval = r.read_uint("maxval");
  if (maxval != 255) r.fail("unsupported maxval " + std::to_string(maxval));
  r.expect_single_ws();

  const std::size_t expected =
      static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels;
  if (bytes.size() - r.pos < expected) {
    ByteReader at_end{bytes, bytes.size()};
    at_end.fail("truncated payload, need " + std::to_string(expected) +
                " bytes after header");
  }
  if (bytes.size() - r.pos > expected) {
    ByteReader at_extra{bytes, r.pos + expected};
    at_extra.fail("trailing data after payload");
  }

  Image img(static_cast<int>(w), static_cast<int>(h), channels);
  const std::uint8_t* p = bytes.data() + r.pos;
  const std::size_t n = img.pixel_count();
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < channels; ++c)
      img.data()[static_cast<std::size_t>(c) * n + i] = p[i * channels + c] / 255.0;
  return img;
}

std::vector<std::uint8_t> save_pnm(const Image& img) {
  std::vector<std::uint8_t> out;
  const std::size_t n = img.pixel_count();
  out.reserve(n * img.channels() + 32);
  append_header(out, img.channels() == 1 ? "P5" : "P6", img.width(),
                img.height(), /*with_maxval=*/true);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < img.channels(); ++c)
      out.push_back(quantise(img.data()[static_cast<std::size_t>(c) * n + i]));
  return out;
}

Mask load_pbm(std::span<const std::uint8_t> bytes) {
  ByteReader r{bytes};
  if (r.eof() || r.bytes[0] != 'P') r.fail("missing PBM magic");
  if (bytes.size() < 2 || bytes[1] != '4')
    throw PnmError("unsupported format, want P4", 1);
  r.pos = 2;

  const long w = r.read_uint("width");
  const long h = r.read_uint("height");
  if (w < 1 || h < 1) r.fail("dimensions must be positive");
  r.expect_single_ws();

  const std::size_t row_bytes = (static_cast<std::size_t>(w) + 7) / 8;
  const std::size_t expected = row_bytes * static_cast<std::size_t>(h);
  if (bytes.size() - r.pos < expected) {
    ByteReader at_end{bytes, bytes.size()};
    at_end.fail("truncated payload, need " + std::to_string(expected) +
                " bytes after header");
  }
  if (bytes.size() - r.pos > expected) {
    ByteReader at_extra{bytes, r.pos + expected};
    at_extra.fail("trailing data after payload");
  }

  Mask mask(static_cast<int>(w), static_cast<int>(h));
  const std::uint8_t* p = bytes.data() + r.pos;
  for (long y = 0; y < h; ++y) {
    const std::uint8_t* row = p + static_cast<std::size_t>(y) * row_bytes;
    for (long x = 0; x < w; ++x) {
      const std::uint8_t byte = row[x >> 3];
      mask.set(static_cast<int>(x), static_cast<int>(y),
               (byte >> (7 - (x & 7))) & 1);
    }
  }
  return mask;
}

std::vector<std::uint8_t> save_pbm(const Mask& mask) {
  const std::size_t row_bytes = (static_cast<std::size_t>(mask.width()) + 7) / 8;
  std::vector<std::uint8_t> out;
  out.reserve(row_bytes * mask.height() + 32);
  append_header(out, "P4", mask.width(), mask.height(), /*with_maxval=*/false);
  for (int y = 0; y < mask.height(); ++y) {
    std::uint8_t byte = 0;
    int nbits = 0;
    for (int x = 0; x < mask.width(); ++x) {
      byte = static_cast<std::uint8_t>((byte << 1) | (mask.known(x, y) ? 1 : 0));
      if (++nbits == 8) {
        out.push_back(byte);
        byte = 0;
        nbits = 0;
      }
    }
    if (nbits > 0) out.push_back(static_cast<std::uint8_t>(byte << (8 - nbits)));
  }
  return out;
}

Image load_image(const std::string& path) {
  try {
    return load_pnm(read_file(path));
  } catch (const PnmError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_image(const std::string& path, const Image& img) {
  write_file(path, save_pnm(img));
}

Mask load_mask(const std::string& path) {
  try {
    return load_pbm(read_file(path));
  } catch (const PnmError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void save_mask(const std::string& path, const Mask& mask) {
  write_file(path, save_pbm(mask));
}

void save_soft_mask(const std::string& path, const SoftMask& soft) {
  Image img(soft.width(), soft.height(), 1);
  for (std::size_t i = 0; i < soft.pixel_count(); ++i)
    img.data()[i] = soft[i] < 0.0 ? 0.0 : (soft[i] > 1.0 ? 1.0 : soft[i]);
  save_image(path, img);
}

}  // namespace dmask
