// SPDX-License-Identifier: Apache-2.0
//
// Error taxonomy for the mimofb library.
//
// Argument validation failures use std::invalid_argument throughout.  The
// types below cover the two failure classes that are not caller bugs:
// resource-budget rejections and numeric breakdowns detected at run time.

#ifndef MIMOFB_ERRORS_HPP
#define MIMOFB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mimofb {

// Thrown when a requested operation would exceed a configured resource
// budget (e.g. a codebook whose size is over the materialization limit).
// The message names the offending parameter so callers can report it.
class resource_limit_error : public std::runtime_error {
  public:
    explicit resource_limit_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Thrown when a numeric procedure cannot continue (non-finite intermediate,
// failed factorization, quadrature collapse, ...).
class numeric_error : public std::runtime_error {
  public:
    explicit numeric_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Thrown by the zero-forcing precoder when the composite channel matrix is
// (numerically) rank deficient.  Carries the reciprocal condition estimate
// that triggered the guard so simulation loops can log it before discarding
// the trial.
class singular_channel_error : public numeric_error {
  public:
    singular_channel_error(const std::string &msg, double rcond_estimate)
        : numeric_error(msg), rcond_(rcond_estimate) {}

    double rcond_estimate() const { return rcond_; }

  private:
    double rcond_;
};

// Exit codes used by the command-line front end.
enum exit_code : int {
    EXIT_OK = 0,
    EXIT_FAILURE_GENERIC = 1, // I/O and other environment failures
    EXIT_USAGE = 2,           // bad flags, bad config file, invalid arguments
    EXIT_RESOURCE_LIMIT = 3,  // resource_limit_error
    EXIT_NUMERIC = 4,         // numeric_error and derived classes
};

} // namespace mimofb

#endif // MIMOFB_ERRORS_HPP
