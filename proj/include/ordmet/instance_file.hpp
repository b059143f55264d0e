#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ordmet/harness.hpp"

namespace ordmet {

/// Syntax or validation error in an instance file. `line` is 1-based; 0
/// means the problem is not tied to one line (a missing section, say).
class InstanceParseError : public std::runtime_error {
 public:
  InstanceParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// An instance plus the solver settings that have no place in Instance.
struct InstanceFile {
  Instance instance;
  std::optional<std::uint64_t> max_iter;
  std::optional<SelectionRule> rule;
};

/// Sections: [group] [structure] [space] [map] [witness] [sequences]
/// [solver]. Lines are "key = value"; '#' starts a comment. See
/// instances/*.ini for every supported key.
InstanceFile parse_instance(std::string_view text, const std::string& fallback_name = "instance");
InstanceFile load_instance(const std::filesystem::path& path);

/// Inverse of parse_instance up to formatting. Throws std::invalid_argument
/// for instances built from arbitrary callables (custom metrics, rule maps,
/// alpha functions without a table, replaced orders).
std::string export_instance(const InstanceFile& f);

std::optional<SelectionRule> parse_rule(std::string_view s);

}  // namespace ordmet
