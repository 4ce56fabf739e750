#pragma once

#include <stdexcept>
#include <string>

namespace treespectra {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model document or a model that violates the tree invariants.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Vertex, ray, arc or depth requests that the model cannot satisfy.
class TopologyError : public Error {
 public:
  using Error::Error;
};

// Spectral parameter, energy window or test function outside its domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Near-pole denominators and failed residual gates.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace treespectra
