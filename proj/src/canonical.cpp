#include "fw/canonical.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>

#include "fw/error.hpp"

namespace fw {
namespace {

void write_real(std::string& out, double x) {
  if (!std::isfinite(x)) {
    out += "null";
    return;
  }
  if (std::abs(x) < 5e-10) x = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  out += buf;
}

void write_string(std::string& out, const std::string& s) {
  // nlohmann's escaping is deterministic; reuse it for one string.
  out += nlohmann::json(s).dump();
}

void newline(std::string& out, int indent, int depth) {
  if (indent < 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

void write(std::string& out, const nlohmann::json& v, int indent, int depth) {
  using T = nlohmann::json::value_t;
  switch (v.type()) {
    case T::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {  // std::map: sorted keys
        if (!first) out += ',';
        first = false;
        newline(out, indent, depth + 1);
        write_string(out, it.key());
        out += indent < 0 ? ":" : ": ";
        write(out, it.value(), indent, depth + 1);
      }
      newline(out, indent, depth);
      out += '}';
      return;
    }
    case T::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ',';
        first = false;
        newline(out, indent, depth + 1);
        write(out, e, indent, depth + 1);
      }
      newline(out, indent, depth);
      out += ']';
      return;
    }
    case T::number_float:
      write_real(out, v.get<double>());
      return;
    case T::string:
      write_string(out, v.get_ref<const std::string&>());
      return;
    default:
      out += v.dump();
      return;
  }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& value, int indent) {
  std::string out;
  write(out, value, indent, 0);
  return out;
}

double round9(double x) {
  double r = std::round(x * 1e9) / 1e9;
  return r == 0.0 ? 0.0 : r;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::Io, "SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace fw
