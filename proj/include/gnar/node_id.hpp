#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace gnar {

/// Five-digit FIPS-style node identifier: two state digits followed by
/// three county digits.
class NodeId {
 public:
  NodeId() = default;

  /// Accepts exactly five decimal digits; throws std::invalid_argument otherwise.
  explicit NodeId(std::string_view code);

  /// Zero-pads a shorter numeric code ("1001" -> "01001") before validating.
  static NodeId normalize(std::string_view raw);

  const std::string& code() const noexcept { return code_; }
  std::string state() const { return code_.substr(0, 2); }
  bool is_unallocated() const noexcept { return code_ == "00000"; }

  auto operator<=>(const NodeId&) const = default;

 private:
  std::string code_;
};

/// Trims whitespace and zero-pads to five digits. Idempotent.
std::string normalize_fips(std::string_view raw);

}  // namespace gnar

template <>
struct std::hash<gnar::NodeId> {
  std::size_t operator()(const gnar::NodeId& id) const noexcept {
    return std::hash<std::string>{}(id.code());
  }
};
