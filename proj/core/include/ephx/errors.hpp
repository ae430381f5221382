#pragma once

#include <stdexcept>
#include <string>

namespace ephx {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Violated precondition on an argument.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class GridMismatch : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

// Probability reached the domain margin during propagation.
class EdgeAbort : public Error {
public:
  EdgeAbort(double t_fs, double edge_prob)
      : Error("edge probability " + std::to_string(edge_prob) + " exceeded the limit at t = " +
              std::to_string(t_fs) + " fs"),
        t_fs(t_fs), edge_prob(edge_prob) {}
  double t_fs;
  double edge_prob;
};

// The energy shift pushed probability past the end of the computed spectrum.
class SpectrumEdgeError : public Error {
public:
  using Error::Error;
};

class NyquistError : public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class MemberNotFound : public Error {
public:
  using Error::Error;
};

class PurityError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  ConfigError(const std::string& msg, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line(line) {}
  int line;
};

}  // namespace ephx
