#include "tocgen/nn/serialize.hpp"

#include <cstring>

#include "tocgen/errors.hpp"
#include "tocgen/layout_io.hpp"

namespace tocgen::nn {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::string& out, float v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

struct Reader {
  const std::string& bytes;
  size_t pos = 0;

  void need(size_t n) const {
    if (pos + n > bytes.size()) throw ParseError("weight container truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
    }
    pos += 4;
    return v;
  }
  float f32() {
    need(4);
    float v;
    std::memcpy(&v, bytes.data() + pos, 4);
    pos += 4;
    return v;
  }
  std::string str(size_t n) {
    need(n);
    std::string s = bytes.substr(pos, n);
    pos += n;
    return s;
  }
};

}  // namespace

std::string serialize_weights(
    const std::vector<std::pair<std::string, const Tensor*>>& tensors) {
  std::string out;
  out.append(kWeightsMagic, 4);
  put_u32(out, kWeightsVersion);
  put_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, tensor] : tensors) {
    put_u32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put_u32(out, static_cast<std::uint32_t>(tensor->shape.size()));
    for (int d : tensor->shape) put_u32(out, static_cast<std::uint32_t>(d));
    for (double v : tensor->data) put_f32(out, static_cast<float>(v));
  }
  return out;
}

std::map<std::string, Tensor> deserialize_weights(const std::string& bytes) {
  Reader r{bytes};
  if (r.str(4) != std::string(kWeightsMagic, 4)) {
    throw ModelVersionError("weight container: bad magic bytes");
  }
  std::uint32_t version = r.u32();
  if (version != kWeightsVersion) {
    throw ModelVersionError("weight container: version " + std::to_string(version) +
                            " unsupported (expected " +
                            std::to_string(kWeightsVersion) + ")");
  }
  std::uint32_t count = r.u32();
  std::map<std::string, Tensor> tensors;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = r.str(r.u32());
    std::uint32_t ndim = r.u32();
    std::vector<int> shape;
    std::int64_t numel = 1;
    for (std::uint32_t d = 0; d < ndim; ++d) {
      shape.push_back(static_cast<int>(r.u32()));
      numel *= shape.back();
    }
    Tensor t(shape);
    for (std::int64_t k = 0; k < numel; ++k) t.data[static_cast<size_t>(k)] = r.f32();
    tensors.emplace(std::move(name), std::move(t));
  }
  return tensors;
}

void save_weights(const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, const Tensor*>>& tensors) {
  write_file(path, serialize_weights(tensors));
}

std::map<std::string, Tensor> load_weights(const std::filesystem::path& path) {
  return deserialize_weights(read_file(path));
}

}  // namespace tocgen::nn
