#ifndef EPINARR_RENDER_HPP
#define EPINARR_RENDER_HPP

#include <string>

#include "epinarr/model.hpp"

namespace epinarr {

/// Pretty-prints a Model to the canonical dialect. parse_model of the
/// result reproduces the model exactly (up to the non-serialized
/// stepSize/levels metadata, which stay at their defaults of 1).
std::string render_model(const Model& model);

}  // namespace epinarr

#endif
