#pragma once

#include <stdexcept>
#include <string>

namespace llp {

/// Invalid model/agent/config parameter (bad rate, probability out of range,
/// unknown key, ...). The message names the offending field.
class config_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input outside an operation's domain (state off the grid, non-unit
/// direction, empty trajectory, ...).
class domain_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Analysis asked for more data than the input carries (e.g. cycle stats
/// from fewer than two record times).
class insufficient_data_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Hard resource guard tripped (environment table larger than its cap).
class resource_limit_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace llp
