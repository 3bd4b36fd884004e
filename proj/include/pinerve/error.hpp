#ifndef PINERVE_ERROR_HPP
#define PINERVE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pinerve
{

struct InvalidArgument : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

/// Malformed partition / simplex / cycle text. `position` is a 0-based
/// character offset into the input.
struct ParseError : std::runtime_error
{
  ParseError(const std::string& what, std::size_t position)
  : std::runtime_error(what + " (at offset " + std::to_string(position) + ")"),
    message(what), position(position)
  {}

  std::string message;
  std::size_t position;
};

struct InvalidPoset : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

struct InvalidMatching : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

struct InvalidRepresentatives : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

struct PreconditionViolation : std::logic_error
{
  using std::logic_error::logic_error;
};

struct InvalidComplex : std::invalid_argument
{
  using std::invalid_argument::invalid_argument;
};

struct Unsupported : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

} // namespace pinerve

#endif // PINERVE_ERROR_HPP
