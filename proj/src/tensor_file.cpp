// Copyright 2026 The VGCL Authors. All Rights Reserved.
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

#include "vgcl/tensor_file.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "vgcl/error.hpp"
#include "vgcl/text_io.hpp"

namespace vgcl {

static_assert(std::endian::native == std::endian::little, "tensor files assume a little-endian host");

namespace {

constexpr char kMagic[8] = {'V', 'G', 'C', 'L', '0', '0', '0', '1'};

template <typename T>
void put(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

class ByteCursor {
 public:
  ByteCursor(const std::string& data, std::filesystem::path path) : data_(data), path_(std::move(path)) {}

  bool done() const { return pos_ == data_.size(); }

  template <typename T>
  T get() {
    T value;
    take(&value, sizeof(T));
    return value;
  }

  void take(void* dst, std::size_t size) {
    if (data_.size() - pos_ < size) throw Error(path_.string() + ": truncated tensor file");
    std::memcpy(dst, data_.data() + pos_, size);
    pos_ += size;
  }

 private:
  const std::string& data_;
  std::filesystem::path path_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_tensors(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors) {
  std::string out(kMagic, sizeof(kMagic));
  for (const auto& tensor : tensors) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.name.size()));
    out += tensor.name;
    put<std::uint32_t>(out, 2);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(tensor.value.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(tensor.value.cols()));
    out.append(reinterpret_cast<const char*>(tensor.value.data()),
               static_cast<std::size_t>(tensor.value.size()) * sizeof(double));
  }
  text::write_file(path, out);
}

std::vector<NamedTensor> read_tensors(const std::filesystem::path& path) {
  const std::string data = text::read_file(path);
  ByteCursor cursor(data, path);
  char magic[8];
  cursor.take(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw Error(path.string() + ": not a VGCL0001 tensor file");
  std::vector<NamedTensor> tensors;
  while (!cursor.done()) {
    NamedTensor tensor;
    tensor.name.resize(cursor.get<std::uint32_t>());
    cursor.take(tensor.name.data(), tensor.name.size());
    const auto rank = cursor.get<std::uint32_t>();
    if (rank < 1 || rank > 2) throw Error(path.string() + ": tensor '" + tensor.name + "' has unsupported rank");
    std::uint64_t rows = cursor.get<std::uint64_t>();
    std::uint64_t cols = 1;
    if (rank == 2) cols = cursor.get<std::uint64_t>();
    tensor.value.resize(static_cast<Index>(rows), static_cast<Index>(cols));
    cursor.take(tensor.value.data(), static_cast<std::size_t>(rows * cols) * sizeof(double));
    tensors.push_back(std::move(tensor));
  }
  return tensors;
}

}  // namespace vgcl
