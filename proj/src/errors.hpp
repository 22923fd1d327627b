#pragma once

/* Library errors carry a stable machine-readable kind (used by the CLI to pick
 * exit codes) plus a human-readable witness message. */

#include <stdexcept>
#include <string>

namespace cohoch {

struct Error : std::runtime_error {
    std::string kind;
    Error(std::string k, const std::string& msg)
        : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
    throw Error(kind, msg);
}

}  // namespace cohoch
