// Copyright 2026 The dctguard Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dctguard/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>

#include "dctguard/error.hpp"

namespace fs = std::filesystem;

namespace dctguard {

std::vector<unsigned char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const fs::path& path, const std::vector<unsigned char>& bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw io_error("short write to " + path.string());
}

ImageBuffer decode_png(const std::vector<unsigned char>& bytes,
                       const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw io_error("bad PNG " + name + ": " + image.message);
  }
  if (image.format & PNG_FORMAT_FLAG_ALPHA) {
    png_image_free(&image);
    throw AlphaChannelError(name);
  }
  if (image.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&image);
    throw io_error("16-bit PNG is not supported: " + name);
  }
  image.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> samples(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, samples.data(), 0, nullptr)) {
    throw io_error("bad PNG " + name + ": " + image.message);
  }
  return ImageBuffer(static_cast<int>(image.width),
                     static_cast<int>(image.height), std::move(samples));
}

std::vector<unsigned char> encode_png(const ImageBuffer& img) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width);
  image.height = static_cast<png_uint_32>(img.height);
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.data.data(), 0,
                                 nullptr)) {
    throw io_error(std::string("PNG encode failed: ") + image.message);
  }
  std::vector<unsigned char> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.data.data(),
                                 0, nullptr)) {
    throw io_error(std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

namespace {

struct PpmReader {
  const std::vector<unsigned char>& bytes;
  std::size_t pos = 2;

  void skip_space() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
  }

  int number(const std::string& name) {
    skip_space();
    long value = 0;
    const std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(bytes[pos]) && value < 1 << 24) {
      value = value * 10 + (bytes[pos++] - '0');
    }
    if (pos == start) throw io_error("malformed PPM header: " + name);
    return static_cast<int>(value);
  }
};

ImageBuffer decode_ppm(const std::vector<unsigned char>& bytes,
                       const std::string& name) {
  PpmReader reader{bytes};
  const int w = reader.number(name);
  const int h = reader.number(name);
  const int maxval = reader.number(name);
  if (maxval != 255) throw io_error("only 8-bit PPM is supported: " + name);
  if (w < 1 || h < 1) throw io_error("empty PPM: " + name);
  if (reader.pos >= bytes.size() || !std::isspace(bytes[reader.pos])) {
    throw io_error("malformed PPM header: " + name);
  }
  ++reader.pos;
  const std::size_t need = static_cast<std::size_t>(w) * h * 3;
  if (bytes.size() - reader.pos < need) throw io_error("truncated PPM: " + name);
  std::vector<std::uint8_t> samples(bytes.begin() + reader.pos,
                                    bytes.begin() + reader.pos + need);
  return ImageBuffer(w, h, std::move(samples));
}

std::vector<unsigned char> encode_ppm(const ImageBuffer& img) {
  const std::string header = "P6\n" + std::to_string(img.width) + " " +
                             std::to_string(img.height) + "\n255\n";
  std::vector<unsigned char> out(header.begin(), header.end());
  out.insert(out.end(), img.data.begin(), img.data.end());
  return out;
}

std::string lower_ext(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

ImageBuffer read_image(const fs::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' &&
      bytes[2] == 'N' && bytes[3] == 'G') {
    return decode_png(bytes, path.string());
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '6') {
    return decode_ppm(bytes, path.string());
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '7') {
    // PAM is the only PNM flavour that can carry alpha.
    throw AlphaChannelError(path.string());
  }
  throw io_error("unrecognised image format: " + path.string());
}

void write_image(const fs::path& path, const ImageBuffer& img) {
  const std::string ext = lower_ext(path);
  if (ext == ".ppm") {
    write_file(path, encode_ppm(img));
  } else {
    write_file(path, encode_png(img));
  }
}

bool is_image_file(const fs::path& path) {
  const std::string ext = lower_ext(path);
  return ext == ".png" || ext == ".ppm";
}

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw io_error("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

std::vector<NamedImage> read_image_dir(const fs::path& dir) {
  std::vector<NamedImage> out;
  for (const auto& path : list_images(dir)) {
    out.push_back({path.filename().string(), read_image(path)});
  }
  return out;
}

}  // namespace dctguard
