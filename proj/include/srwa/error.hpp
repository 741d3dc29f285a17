#pragma once

#include <stdexcept>
#include <string>

namespace srwa {

// Malformed input text (topology files, configs, serialized samples).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Two lightpaths on the same (arc, wavelength).
class ConflictError : public std::runtime_error {
 public:
  ConflictError(int arc, int wavelength)
      : std::runtime_error("wavelength conflict on arc " + std::to_string(arc) +
                           " wavelength " + std::to_string(wavelength)),
        arc_(arc),
        wavelength_(wavelength) {}
  int arc() const { return arc_; }
  int wavelength() const { return wavelength_; }

 private:
  int arc_;
  int wavelength_;
};

class ModelError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace srwa
