#pragma once

#include <stdexcept>
#include <string>

namespace emu {

// Bad or inconsistent input (malformed JSON, rotation mismatch, ...).
// CLI maps this to exit code 2.
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A violated internal invariant: iteration caps, Euler failures,
// audit mismatches.  CLI maps this to exit code 3.
struct internal_error : std::runtime_error {
    explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

#define EMU_INPUT_CHECK(cond, msg)                        \
    do {                                                  \
        if (!(cond)) throw ::emu::input_error(msg);       \
    } while (0)

#define EMU_INTERNAL_CHECK(cond, msg)                     \
    do {                                                  \
        if (!(cond)) throw ::emu::internal_error(msg);    \
    } while (0)

} // namespace emu
