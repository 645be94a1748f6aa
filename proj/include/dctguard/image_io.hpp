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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dctguard/image.hpp"

namespace dctguard {

// PNG (8-bit RGB or gray) and binary PPM (P6, maxval 255). The format is
// picked from the file signature on read and from the extension on write.
// Images with alpha raise AlphaChannelError.
ImageBuffer read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const ImageBuffer& img);

ImageBuffer decode_png(const std::vector<unsigned char>& bytes,
                       const std::string& name = "<memory>");
std::vector<unsigned char> encode_png(const ImageBuffer& img);

bool is_image_file(const std::filesystem::path& path);

struct NamedImage {
  std::string name;  // file name including extension
  ImageBuffer image;
};

// Image files directly inside `dir`, sorted by file name.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);
std::vector<NamedImage> read_image_dir(const std::filesystem::path& dir);

std::vector<unsigned char> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path,
                const std::vector<unsigned char>& bytes);

}  // namespace dctguard
