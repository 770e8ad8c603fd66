#pragma once

#include "hopnet/io.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hopnet::cli {

inline constexpr const char* kSchema = "hopnet/1";

/// Invalid configuration; `pointer` is a JSON pointer into the config
/// document or the name of the offending flag.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string pointer, const std::string& message)
        : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}
    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

enum class Kind { number, integer, text, numbers, flag };
enum class Bound { any, nonnegative, positive };

struct ParamSpec {
    std::string name;
    Kind kind;
    Json fallback;
    std::string help;
    Bound bound = Bound::any;
    std::vector<std::string> choices{};
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<ParamSpec> params;
};

const std::vector<CommandSpec>& commands();
/// Throws ConfigError at /command for an unknown name.
const CommandSpec& command(std::string_view name);

/// Resolved parameters of one run. `params` lists every parameter of the
/// command in declaration order.
struct RunConfig {
    std::string command;
    Json params;

    /// {schema, command, params}: the canonical config document.
    Json document() const;
};

/// Checks a value against a parameter and normalises it (integers stay
/// integers, lists become arrays of numbers).
Json check_value(const ParamSpec& p, const Json& value, const std::string& pointer);
/// Parses flag text: numbers, integers, comma-separated lists, true/false.
Json parse_flag(const ParamSpec& p, const std::string& text);

/// Defaults, then the config document (may be null), then flags.
/// `cli_command` is empty when no subcommand was given.
RunConfig resolve(std::string_view cli_command, const Json& document,
                  const std::map<std::string, std::string>& flags);

/// Reads and parses a JSON file; parse failures are ConfigErrors.
Json read_config_file(const std::string& path);

/// SHA-1 of "blob <size>\0" + content, lowercase hex.
std::string git_blob_sha1(std::string_view content);

double number(const Json& params, const char* key);
std::uint64_t integer(const Json& params, const char* key);
std::string text(const Json& params, const char* key);
std::vector<double> numbers(const Json& params, const char* key);
bool flag(const Json& params, const char* key);

}  // namespace hopnet::cli
