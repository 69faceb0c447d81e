#pragma once

#include <stdexcept>
#include <string>

namespace lenori {

/// Malformed or inconsistent input data (bad rows, bad catalog files, empty slices where data is required).
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a numerical routine.
class NumericError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

} // namespace lenori
