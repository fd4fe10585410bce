#include "geomir/session.hpp"

#include "geomir/error.hpp"
#include "geomir/imaging.hpp"

namespace geomir {

Session::Session(std::string id, QueryResult result, const LayoutConfig& cfg)
    : id_(std::move(id)), result_(std::move(result)), cfg_(cfg), graph_(build_graph(result_.tree, cfg_)) {
  publish();
}

void Session::publish() {
  auto frame = std::make_shared<const nlohmann::json>(frame_json(graph_, result_.draw_order));
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(frame);
}

std::shared_ptr<const nlohmann::json> Session::frame() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

template <typename F>
nlohmann::json Session::mutate(F&& change) {
  std::unique_lock lock(writer_, std::try_to_lock);
  if (!lock.owns_lock()) throw Error(ErrorKind::SessionBusy, id_);
  change();
  publish();
  return *frame();
}

nlohmann::json Session::step(int ticks) {
  if (ticks < 0 || ticks > SessionStore::kMaxTicksPerRequest) {
    throw Error(ErrorKind::InvalidConfig, "tick count must be in [0, " +
                                              std::to_string(SessionStore::kMaxTicksPerRequest) + "]");
  }
  return mutate([&] { geomir::step(graph_, cfg_, ticks); });
}

nlohmann::json Session::pin(std::string_view particle, double x, double y) {
  return mutate([&] { geomir::pin(graph_, particle, x, y); });
}

nlohmann::json Session::release(std::string_view particle) {
  return mutate([&] { geomir::release(graph_, particle); });
}

SessionStore::SessionStore(std::shared_ptr<const Index> index, LayoutConfig layout, std::size_t capacity)
    : index_(std::move(index)), layout_(layout), capacity_(capacity == 0 ? 1 : capacity) {
  layout_.validate();
}

SessionStore::Created SessionStore::create(std::span<const std::uint8_t> image_bytes, const QueryConfig& cfg) {
  QueryResult result = query(image_bytes, *index_, cfg);
  nlohmann::json result_json = to_json(result, *index_);

  std::lock_guard lock(mutex_);
  const std::string id = "s" + std::to_string(next_id_++);
  auto session = std::make_shared<Session>(id, std::move(result), layout_);
  recency_.push_front(id);
  sessions_.emplace(id, Entry{session, recency_.begin()});
  while (sessions_.size() > capacity_) {
    sessions_.erase(recency_.back());
    recency_.pop_back();
  }
  return {std::move(session), std::move(result_json)};
}

std::shared_ptr<Session> SessionStore::get(std::string_view id) {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorKind::UnknownSession, std::string(id));
  recency_.splice(recency_.begin(), recency_, it->second.position);
  return it->second.session;
}

nlohmann::json SessionStore::step(std::string_view id, int ticks) { return get(id)->step(ticks); }

nlohmann::json SessionStore::frame(std::string_view id) { return *get(id)->frame(); }

nlohmann::json SessionStore::pin(std::string_view id, std::string_view particle, double x, double y) {
  return get(id)->pin(particle, x, y);
}

nlohmann::json SessionStore::release(std::string_view id, std::string_view particle) {
  return get(id)->release(particle);
}

std::vector<std::uint8_t> SessionStore::thumbnail(std::string_view image_id) {
  {
    std::lock_guard lock(thumb_mutex_);
    if (const auto it = thumbs_.find(image_id); it != thumbs_.end()) return it->second;
  }
  const std::size_t i = index_->find(image_id);
  if (i == std::string::npos) throw Error(ErrorKind::UnknownImage, std::string(image_id));
  auto png = encode_png(make_thumbnail(read_image(index_->image_path(i)), kThumbnailSide));
  std::lock_guard lock(thumb_mutex_);
  return thumbs_.emplace(std::string(image_id), std::move(png)).first->second;
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

}  // namespace geomir
