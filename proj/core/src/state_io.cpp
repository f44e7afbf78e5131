#include "resmono/state_io.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace resmono {

namespace {

using nlohmann::json;

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void append_le(std::string& out, const void* p, std::size_t n) {
  const auto* b = static_cast<const unsigned char*>(p);
  if constexpr (std::endian::native == std::endian::little) {
    out.append(reinterpret_cast<const char*>(b), n);
  } else {
    for (std::size_t i = n; i-- > 0;) out.push_back(static_cast<char>(b[i]));
  }
}

}  // namespace

DensityMatrix parse_state_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("state file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j.contains("matrix"))
    throw std::invalid_argument("state file: need \"dims\" and \"matrix\"");
  Dims dims;
  std::vector<int> cut;
  try {
    dims = j.at("dims").get<Dims>();
    if (j.contains("cut")) cut = j.at("cut").get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("state file: ") + e.what());
  }
  if (dims.empty()) throw std::invalid_argument("state file: empty dims");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("state file: dims must be positive");
  const int n = total_dim(dims);
  const json& m = j.at("matrix");
  if (!m.is_array() || m.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("state file: matrix must list prod(dims)^2 entries");
  Matrix rho(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const json& e = m[static_cast<std::size_t>(r) * n + c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw std::invalid_argument("state file: entries must be [re, im]");
      rho(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  for (int c : cut)
    if (c < 0 || c >= static_cast<int>(dims.size())) throw std::invalid_argument("state file: cut index out of range");
  return DensityMatrix(rho, dims, cut);
}

DensityMatrix read_state_file(const std::string& path) { return parse_state_json(read_all(path)); }

std::string state_to_json(const DensityMatrix& rho) {
  json j = json::object();
  j["dims"] = rho.dims();
  j["cut"] = rho.cut();
  json m = json::array();
  const Matrix& a = rho.matrix();
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) m.push_back({a(r, c).real(), a(r, c).imag()});
  j["matrix"] = std::move(m);
  // nlohmann sorts keys; emit the documented order by hand.
  return "{\"dims\":" + j["dims"].dump() + ",\"cut\":" + j["cut"].dump() + ",\"matrix\":" + j["matrix"].dump() + "}\n";
}

void write_state_file(const std::string& path, const DensityMatrix& rho) { write_file_atomic(path, state_to_json(rho)); }

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string state_digest(const DensityMatrix& rho) {
  std::string bytes;
  for (int d : rho.dims()) {
    const std::int32_t v = d;
    append_le(bytes, &v, sizeof v);
  }
  const Matrix& a = rho.matrix();
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) {
      const double re = a(r, c).real(), im = a(r, c).imag();
      append_le(bytes, &re, sizeof re);
      append_le(bytes, &im, sizeof im);
    }
  return sha256_hex(bytes);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename onto " + path + ": " + ec.message());
  }
}

}  // namespace resmono
