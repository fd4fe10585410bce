#include "geomir/layout.hpp"

#include <cmath>
#include <numbers>

#include "geomir/error.hpp"
#include "geomir/random.hpp"

namespace geomir {

std::string_view level_name(Level level) {
  switch (level) {
    case Level::Root: return "root";
    case Level::Country: return "country";
    case Level::City: return "city";
    case Level::Image: return "image";
  }
  return "unknown";
}

double LayoutConfig::rest_length(SpringTier tier) const {
  switch (tier) {
    case SpringTier::RootCountry: return rest_root_country;
    case SpringTier::CountryCity: return rest_country_city;
    case SpringTier::Image: return rest_image;
  }
  return rest_image;
}

double LayoutConfig::stiffness(SpringTier tier) const {
  switch (tier) {
    case SpringTier::RootCountry: return stiffness_root_country;
    case SpringTier::CountryCity: return stiffness_country_city;
    case SpringTier::Image: return stiffness_image;
  }
  return stiffness_image;
}

void LayoutConfig::validate() const {
  const double positive[] = {rest_root_country, rest_country_city, rest_image, stiffness_root_country,
                             stiffness_country_city, stiffness_image, repulsion, min_distance,
                             timestep, max_speed, canvas_width, canvas_height};
  for (const double v : positive) {
    if (!(v > 0.0)) throw Error(ErrorKind::InvalidConfig, "layout constants must be positive");
  }
  if (!(damping > 0.0 && damping <= 1.0)) throw Error(ErrorKind::InvalidConfig, "damping must be in (0, 1]");
  if (!(jitter_radius >= 0.0)) throw Error(ErrorKind::InvalidConfig, "jitter_radius must be >= 0");
}

int LayoutGraph::find(std::string_view id) const {
  for (std::size_t i = 0; i < particles.size(); ++i) {
    if (particles[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

std::string country_particle_id(std::string_view country) { return "country:" + std::string(country); }

std::string city_particle_id(std::string_view country, std::string_view city) {
  return "city:" + std::string(country) + "/" + std::string(city);
}

std::string image_particle_id(std::string_view image_id) { return "image:" + std::string(image_id); }

LayoutGraph build_graph(const GeoTree& tree, const LayoutConfig& cfg) {
  cfg.validate();
  LayoutGraph g;
  g.repulsion_groups.resize(3);
  Rng rng(cfg.jitter_seed);

  Particle root{"root", Level::Root, cfg.center(), Eigen::Vector2d::Zero(), cfg.center(), ""};
  g.particles.push_back(root);

  auto add = [&](std::string id, Level level, std::string payload, int parent, SpringTier tier) {
    const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double radius = cfg.jitter_radius * uniform(rng, 0.5, 1.0);
    const Eigen::Vector2d pos =
        g.particles[static_cast<std::size_t>(parent)].position + radius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
    const int index = static_cast<int>(g.particles.size());
    g.particles.push_back({std::move(id), level, pos, Eigen::Vector2d::Zero(), std::nullopt, std::move(payload)});
    g.springs.push_back({parent, index, tier});
    g.repulsion_groups[static_cast<std::size_t>(level) - 1].push_back(index);
    return index;
  };

  for (const auto& country : tree.countries) {
    const int c = add(country_particle_id(country.name), Level::Country, country.name, 0, SpringTier::RootCountry);
    for (const auto& city : country.cities) {
      const int t = add(city_particle_id(country.name, city.name), Level::City, city.name, c, SpringTier::CountryCity);
      for (const auto& image : city.images) {
        add(image_particle_id(image), Level::Image, image, t, SpringTier::Image);
      }
    }
    for (const auto& image : country.images) {
      add(image_particle_id(image), Level::Image, image, c, SpringTier::Image);
    }
  }
  return g;
}

std::vector<Eigen::Vector2d> forces(const LayoutGraph& graph, const LayoutConfig& cfg) {
  std::vector<Eigen::Vector2d> f(graph.particles.size(), Eigen::Vector2d::Zero());
  for (const Spring& s : graph.springs) {
    const Eigen::Vector2d delta = graph.particles[static_cast<std::size_t>(s.child)].position -
                                  graph.particles[static_cast<std::size_t>(s.parent)].position;
    const double d = delta.norm();
    if (d == 0.0) continue;
    // Pulls the child toward the parent when stretched, pushes when compressed.
    const Eigen::Vector2d pull = cfg.stiffness(s.tier) * (d - cfg.rest_length(s.tier)) * (delta / d);
    f[static_cast<std::size_t>(s.parent)] += pull;
    f[static_cast<std::size_t>(s.child)] -= pull;
  }
  for (const auto& group : graph.repulsion_groups) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        const auto a = static_cast<std::size_t>(group[i]);
        const auto b = static_cast<std::size_t>(group[j]);
        const Eigen::Vector2d delta = graph.particles[a].position - graph.particles[b].position;
        const double d = delta.norm();
        if (d == 0.0) continue;
        const double clamped = std::max(d, cfg.min_distance);
        const Eigen::Vector2d push = (cfg.repulsion / (clamped * clamped)) * (delta / d);
        f[a] += push;
        f[b] -= push;
      }
    }
  }
  return f;
}

void step(LayoutGraph& graph, const LayoutConfig& cfg) {
  const std::vector<Eigen::Vector2d> f = forces(graph, cfg);
  for (std::size_t i = 0; i < graph.particles.size(); ++i) {
    Particle& p = graph.particles[i];
    if (p.pinned) {
      p.position = *p.pinned;
      p.velocity.setZero();
      continue;
    }
    p.velocity = cfg.damping * (p.velocity + f[i] * cfg.timestep);
    const double speed = p.velocity.norm();
    if (speed > cfg.max_speed) p.velocity *= cfg.max_speed / speed;
    p.position += p.velocity * cfg.timestep;
  }
  ++graph.step_count;
}

void step(LayoutGraph& graph, const LayoutConfig& cfg, int ticks) {
  for (int i = 0; i < ticks; ++i) step(graph, cfg);
}

namespace {

Particle& particle(LayoutGraph& graph, std::string_view id) {
  const int i = graph.find(id);
  if (i < 0) throw Error(ErrorKind::UnknownParticle, std::string(id));
  return graph.particles[static_cast<std::size_t>(i)];
}

}  // namespace

void pin(LayoutGraph& graph, std::string_view id, double x, double y) {
  Particle& p = particle(graph, id);
  p.pinned = Eigen::Vector2d(x, y);
  p.position = *p.pinned;
  p.velocity.setZero();
}

void release(LayoutGraph& graph, std::string_view id) {
  Particle& p = particle(graph, id);
  if (p.level == Level::Root) throw Error(ErrorKind::CannotReleaseRoot, std::string(id));
  p.pinned.reset();
  p.velocity.setZero();
}

double kinetic_energy(const LayoutGraph& graph) {
  double sum = 0.0;
  for (const auto& p : graph.particles) {
    if (!p.pinned) sum += p.velocity.squaredNorm();
  }
  return 0.5 * sum;
}

nlohmann::json frame_json(const LayoutGraph& graph, const std::vector<std::string>& draw_order) {
  nlohmann::json particles = nlohmann::json::array();
  for (const auto& p : graph.particles) {
    particles.push_back({{"id", p.id},
                         {"level", level_name(p.level)},
                         {"x", p.position.x()},
                         {"y", p.position.y()},
                         {"payload", p.payload}});
  }
  return {{"step", graph.step_count}, {"particles", particles}, {"draw_order", draw_order}};
}

}  // namespace geomir
