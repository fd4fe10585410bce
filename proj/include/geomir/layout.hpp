#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include "json.hpp"

#include "geomir/geostore.hpp"

namespace geomir {

enum class Level { Root, Country, City, Image };

std::string_view level_name(Level level);

/// Spring tiers, named by the parent-child levels they join.
enum class SpringTier { RootCountry, CountryCity, Image };

struct LayoutConfig {
  double rest_root_country = 200.0;
  double rest_country_city = 100.0;
  double rest_image = 50.0;
  double stiffness_root_country = 0.05;
  double stiffness_country_city = 0.05;
  double stiffness_image = 0.05;
  double repulsion = 5000.0;
  double min_distance = 1.0;
  double damping = 0.9;
  double timestep = 1.0;
  double max_speed = 50.0;
  std::uint64_t jitter_seed = 7;
  double jitter_radius = 10.0;
  double canvas_width = 1200.0;
  double canvas_height = 800.0;

  Eigen::Vector2d center() const { return {canvas_width / 2.0, canvas_height / 2.0}; }
  double rest_length(SpringTier tier) const;
  double stiffness(SpringTier tier) const;
  void validate() const;
};

struct Particle {
  std::string id;
  Level level = Level::Root;
  Eigen::Vector2d position = Eigen::Vector2d::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  std::optional<Eigen::Vector2d> pinned;
  /// Country or city name, or the image id.
  std::string payload;
};

struct Spring {
  int parent = 0;
  int child = 0;
  SpringTier tier = SpringTier::RootCountry;
};

/// Particle 0 is the root, pinned at the canvas center. Springs mirror the
/// geo tree; particles of one level repel each other.
struct LayoutGraph {
  std::vector<Particle> particles;
  std::vector<Spring> springs;
  /// Country, city and image groups, in that order.
  std::vector<std::vector<int>> repulsion_groups;
  std::uint64_t step_count = 0;

  /// Index of the particle with `id`, or -1.
  int find(std::string_view id) const;
};

std::string country_particle_id(std::string_view country);
std::string city_particle_id(std::string_view country, std::string_view city);
std::string image_particle_id(std::string_view image_id);

LayoutGraph build_graph(const GeoTree& tree, const LayoutConfig& cfg = {});

/// One semi-implicit Euler tick.
void step(LayoutGraph& graph, const LayoutConfig& cfg = {});
void step(LayoutGraph& graph, const LayoutConfig& cfg, int ticks);

/// Net force on every particle at the current positions.
std::vector<Eigen::Vector2d> forces(const LayoutGraph& graph, const LayoutConfig& cfg);

/// Throws UnknownParticle.
void pin(LayoutGraph& graph, std::string_view particle, double x, double y);
/// Throws UnknownParticle, CannotReleaseRoot.
void release(LayoutGraph& graph, std::string_view particle);

/// Half the summed squared speed of unpinned particles (unit mass).
double kinetic_energy(const LayoutGraph& graph);

/// {step, particles: [{id, level, x, y, payload}], draw_order}
nlohmann::json frame_json(const LayoutGraph& graph, const std::vector<std::string>& draw_order);

}  // namespace geomir
