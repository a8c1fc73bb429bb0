#pragma once

// Run configuration: a YAML document with freestream, geometry, targets,
// composite, solver, adaptation and output blocks. Unknown keys are errors.
// Angles are given in degrees and stored in radians.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mmdwr/builtin_meshes.hpp"
#include "mmdwr/functionals.hpp"
#include "mmdwr/multimesh_driver.hpp"

namespace mmdwr {

enum class GeometryCase { ChannelBump, Airfoil, File };
const char* to_string(GeometryCase c);

struct GeometryConfig {
  GeometryCase kind = GeometryCase::ChannelBump;
  ChannelOptions channel;  // kind == ChannelBump; one bump
  AirfoilOptions airfoil;  // kind == Airfoil
  std::string file;        // kind == File, resolved against the config directory
  int uniform_refinements = 0;
};

struct TargetConfig {
  std::string name;
  FunctionalKind kind = FunctionalKind::Drag;
  std::string marker = "wall";
  double chord = 1.0;
  Vec2 x_ref{0.25, 0.0};
};

struct OutputConfig {
  std::string directory = "out";
  bool vtk = true;
};

struct RunConfig {
  FreestreamSpec freestream;  // attack_angle in radians
  double attack_angle_deg = 0.0;
  GeometryConfig geometry;
  std::vector<TargetConfig> targets;
  CompositeKind composite = CompositeKind::Product;
  std::vector<double> coefficients;  // exponents or weights; empty means all ones
  NewtonConfig solver;
  AdaptationConfig adaptation;
  std::vector<double> baseline_weights;  // empty means the composite weights
  OutputConfig output;
  std::uint64_t seed = 0;
  std::string base_dir = ".";  // directory of the config file

  std::vector<TargetFunctional> target_functionals() const;
  CompositeFunctional composite_functional() const;
  std::vector<double> resolved_baseline_weights() const;
  std::shared_ptr<const RootMesh> root_mesh() const;
  HierarchicalTree initial_tree() const;
};

/// Parses and validates. Throws ConfigError listing every problem with its line.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
/// Reads a file; IoError when unreadable.
RunConfig load_config(const std::string& path);
/// YAML text that parses back to an equal configuration.
std::string to_yaml(const RunConfig& cfg);

}  // namespace mmdwr
