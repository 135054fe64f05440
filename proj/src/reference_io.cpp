#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <openssl/evp.h>

#include "dcode/harness.hpp"
#include "json.hpp"

namespace dcode {

namespace {

constexpr std::array<char, 8> magic{'D', 'C', 'O', 'D', 'E', 'R', 'E', 'F'};
constexpr int lagrangePoints = 8;

static_assert(std::endian::native == std::endian::little, "reference files are written on little-endian hosts only");

std::string sha256_hex(const void* data, std::size_t len) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int md_len = 0;
  if (EVP_Digest(data, len, md, &md_len, EVP_sha256(), nullptr) != 1) throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < md_len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("reference file truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

std::string ReferenceSolution::payload_digest() const {
  return sha256_hex(samples.data(), static_cast<std::size_t>(samples.size()) * sizeof(double));
}

Eigen::VectorXd ReferenceSolution::evaluate(double t) const {
  if (count() == 0) throw std::logic_error("ReferenceSolution: empty");
  const double h = spacing();
  const double x = t / h;
  const double last = static_cast<double>(count() - 1);
  if (x < -1e-9 || x > last + 1e-9) throw std::out_of_range("ReferenceSolution: t outside the sampled interval");
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return samples.col(static_cast<Index>(nearest));
  const Index pts = std::min<Index>(lagrangePoints, count());
  Index base = static_cast<Index>(std::floor(x)) - (pts / 2 - 1);
  base = std::clamp<Index>(base, 0, count() - pts);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim());
  for (Index i = 0; i < pts; ++i) {
    double w = 1.0;
    const double xi = static_cast<double>(base + i);
    for (Index m = 0; m < pts; ++m)
      if (m != i) w *= (x - static_cast<double>(base + m)) / (xi - static_cast<double>(base + m));
    acc += w * samples.col(base + i);
  }
  return acc;
}

void ReferenceSolution::save(const std::string& path) {
  digest = payload_digest();
  nlohmann::json h;
  h["format"] = 1;
  h["problem"] = problem;
  h["scheme"] = scheme;
  h["order"] = order;
  h["k"] = k;
  h["n_steps"] = n_steps;
  h["stride"] = stride;
  h["t_end"] = t_end;
  h["dim"] = dim();
  h["count"] = count();
  h["estimated_error"] = estimated_error;
  h["sha256"] = digest;
  const std::string header = h.dump();

  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(magic.data(), magic.size());
    write_u64(os, header.size());
    os.write(header.data(), static_cast<std::streamsize>(header.size()));
    os.write(reinterpret_cast<const char*>(samples.data()),
             static_cast<std::streamsize>(samples.size() * static_cast<Index>(sizeof(double))));
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

ReferenceSolution ReferenceSolution::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open reference file " + path);
  std::array<char, 8> m{};
  if (!is.read(m.data(), m.size()) || m != magic) throw std::runtime_error(path + ": not a reference file");
  const std::uint64_t hlen = read_u64(is);
  if (hlen > (1u << 26)) throw std::runtime_error(path + ": implausible header length");
  std::string header(hlen, '\0');
  if (!is.read(header.data(), static_cast<std::streamsize>(hlen))) throw std::runtime_error(path + ": truncated header");
  const auto h = nlohmann::json::parse(header);

  ReferenceSolution ref;
  ref.problem = h.at("problem").get<std::string>();
  ref.scheme = h.at("scheme").get<std::string>();
  ref.order = h.at("order").get<int>();
  ref.k = h.at("k").get<double>();
  ref.n_steps = h.at("n_steps").get<Index>();
  ref.stride = h.at("stride").get<Index>();
  ref.t_end = h.at("t_end").get<double>();
  ref.estimated_error = h.at("estimated_error").get<std::vector<double>>();
  const Index dim = h.at("dim").get<Index>();
  const Index count = h.at("count").get<Index>();
  ref.samples.resize(dim, count);
  if (!is.read(reinterpret_cast<char*>(ref.samples.data()),
               static_cast<std::streamsize>(dim * count * static_cast<Index>(sizeof(double)))))
    throw std::runtime_error(path + ": truncated payload");
  ref.digest = ref.payload_digest();
  if (ref.digest != h.at("sha256").get<std::string>()) throw std::runtime_error(path + ": payload digest mismatch");
  return ref;
}

}  // namespace dcode
