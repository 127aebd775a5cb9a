#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace povshift {

// Framing shared by every serialized model: 4-byte magic, format version,
// header length, a JSON header describing the payload, then the raw doubles
// of each block listed under header["blocks"], in order.
inline constexpr char kModelMagic[4] = {'P', 'V', 'S', 'H'};
inline constexpr uint32_t kModelFormatVersion = 1;

struct ModelBlock {
  std::string name;
  std::vector<double> values;
};

namespace container_detail {

inline void append_u32(std::string& out, uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

inline void append_u64(std::string& out, uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  out.append(buf, 8);
}

inline uint32_t read_u32(const std::string& s, size_t& pos) {
  if (pos + 4 > s.size()) throw std::runtime_error("model data truncated");
  uint32_t v;
  std::memcpy(&v, s.data() + pos, 4);
  pos += 4;
  return v;
}

inline uint64_t read_u64(const std::string& s, size_t& pos) {
  if (pos + 8 > s.size()) throw std::runtime_error("model data truncated");
  uint64_t v;
  std::memcpy(&v, s.data() + pos, 8);
  pos += 8;
  return v;
}

}  // namespace container_detail

// Serializes header plus blocks; header["blocks"] is filled from `blocks`.
inline std::string pack_model(nlohmann::json header, const std::vector<ModelBlock>& blocks) {
  nlohmann::json block_list = nlohmann::json::array();
  for (const ModelBlock& b : blocks) {
    nlohmann::json jb;
    jb["name"] = b.name;
    jb["size"] = b.values.size();
    block_list.push_back(jb);
  }
  header["blocks"] = block_list;
  std::string head = header.dump();

  std::string out(kModelMagic, 4);
  container_detail::append_u32(out, kModelFormatVersion);
  container_detail::append_u64(out, head.size());
  out += head;
  for (const ModelBlock& b : blocks)
    out.append(reinterpret_cast<const char*>(b.values.data()), b.values.size() * sizeof(double));
  return out;
}

// Validates the framing and returns the header; block payloads are appended
// to *blocks in header order. Throws std::runtime_error on malformed input.
inline nlohmann::json unpack_model(const std::string& bytes, std::vector<ModelBlock>* blocks) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kModelMagic, 4) != 0)
    throw std::runtime_error("not a model file (bad magic)");
  size_t pos = 4;
  uint32_t version = container_detail::read_u32(bytes, pos);
  if (version != kModelFormatVersion)
    throw std::runtime_error("unsupported model file version " + std::to_string(version));
  uint64_t head_len = container_detail::read_u64(bytes, pos);
  if (pos + head_len > bytes.size()) throw std::runtime_error("model data truncated");
  nlohmann::json header = nlohmann::json::parse(bytes.substr(pos, head_len));
  pos += head_len;
  if (blocks && header.contains("blocks")) {
    for (const auto& jb : header.at("blocks")) {
      ModelBlock b;
      b.name = jb.at("name").get<std::string>();
      size_t size = jb.at("size").get<size_t>();
      if (pos + size * sizeof(double) > bytes.size())
        throw std::runtime_error("model data truncated");
      b.values.resize(size);
      std::memcpy(b.values.data(), bytes.data() + pos, size * sizeof(double));
      pos += size * sizeof(double);
      blocks->push_back(std::move(b));
    }
  }
  return header;
}

}  // namespace povshift
