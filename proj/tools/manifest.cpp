#include "manifest.hpp"

#include <array>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>

#include "nhscat/errors.hpp"

namespace nhscat::cli {

std::string sha256_hex(const std::string& bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  return sha256_hex(std::string(std::istreambuf_iterator<char>(in), {}));
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["flags"] = flags;
  j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  j["grid"] = grid;
  j["library_version"] = library_version;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  return j;
}

}  // namespace nhscat::cli
