#include "depembed/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace depembed {

namespace {

constexpr char kMagic[4] = {'D', 'M', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_u64(std::ofstream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void write_string(std::ofstream& out, const std::string& s) {
  write_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t read_u32(std::ifstream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
std::uint64_t read_u64(std::ifstream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
std::string read_string(std::ifstream& in) {
  std::uint32_t len = read_u32(in);
  std::string s(len, '\0');
  in.read(s.data(), len);
  return s;
}

}  // namespace

void Checkpoint::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  write_string(out, kind);

  write_u32(out, static_cast<std::uint32_t>(scalars.size()));
  for (const auto& [name, value] : scalars) {
    write_string(out, name);
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
  }

  write_u32(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, mat] : tensors) {
    write_string(out, name);
    write_u64(out, static_cast<std::uint64_t>(mat.rows()));
    write_u64(out, static_cast<std::uint64_t>(mat.cols()));
    // row-major on disk
    for (Eigen::Index r = 0; r < mat.rows(); ++r)
      for (Eigen::Index c = 0; c < mat.cols(); ++c) {
        double v = mat(r, c);
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint Checkpoint::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + ": not a checkpoint file");
  std::uint32_t version = read_u32(in);
  if (version != kVersion)
    throw std::runtime_error(path + ": unsupported checkpoint version " + std::to_string(version));

  Checkpoint ckpt;
  ckpt.kind = read_string(in);

  std::uint32_t n_scalars = read_u32(in);
  for (std::uint32_t i = 0; i < n_scalars; ++i) {
    std::string name = read_string(in);
    double value = 0.0;
    in.read(reinterpret_cast<char*>(&value), sizeof value);
    ckpt.scalars.emplace(std::move(name), value);
  }

  std::uint32_t n_tensors = read_u32(in);
  for (std::uint32_t i = 0; i < n_tensors; ++i) {
    std::string name = read_string(in);
    std::uint64_t rows = read_u64(in);
    std::uint64_t cols = read_u64(in);
    Eigen::MatrixXd mat(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::uint64_t r = 0; r < rows; ++r)
      for (std::uint64_t c = 0; c < cols; ++c) {
        double v = 0.0;
        in.read(reinterpret_cast<char*>(&v), sizeof v);
        mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
      }
    ckpt.tensors.emplace(std::move(name), std::move(mat));
  }
  if (!in) throw std::runtime_error(path + ": truncated checkpoint");
  return ckpt;
}

double Checkpoint::scalar(const std::string& name) const {
  auto it = scalars.find(name);
  if (it == scalars.end()) throw std::runtime_error("checkpoint missing scalar: " + name);
  return it->second;
}

const Eigen::MatrixXd& Checkpoint::tensor(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) throw std::runtime_error("checkpoint missing tensor: " + name);
  return it->second;
}

void Checkpoint::require_kind(const std::string& expected) const {
  if (kind != expected)
    throw std::runtime_error("checkpoint kind mismatch: expected " + expected + ", got " + kind);
}

}  // namespace depembed
