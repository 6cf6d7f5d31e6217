#ifndef SCRIPTID_ERROR_HPP
#define SCRIPTID_ERROR_HPP

#include <stdexcept>
#include <string>

namespace scriptid {

// Unreadable or malformed inputs: files, formats, flag values.
// The CLI maps these to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated preconditions and invariants: degenerate datasets, dimension
// mismatches, out-of-range indices. The CLI maps these to exit code 3.
struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace scriptid

#endif // SCRIPTID_ERROR_HPP
