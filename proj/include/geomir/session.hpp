#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "geomir/index.hpp"
#include "geomir/layout.hpp"
#include "geomir/retrieval.hpp"

namespace geomir {

/// One query's result plus the layout simulation built from it.
/// Mutations are single-writer: a second concurrent mutation fails with
/// SessionBusy instead of waiting.
class Session {
 public:
  Session(std::string id, QueryResult result, const LayoutConfig& cfg);

  const std::string& id() const { return id_; }
  const QueryResult& result() const { return result_; }

  nlohmann::json step(int ticks);
  nlohmann::json pin(std::string_view particle, double x, double y);
  nlohmann::json release(std::string_view particle);

  /// Latest published frame; never blocks on a running mutation.
  std::shared_ptr<const nlohmann::json> frame() const;

 private:
  template <typename F>
  nlohmann::json mutate(F&& change);
  void publish();

  std::string id_;
  QueryResult result_;
  LayoutConfig cfg_;
  LayoutGraph graph_;
  std::mutex writer_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const nlohmann::json> snapshot_;
};

/// In-memory sessions over one immutable index, least recently used evicted.
class SessionStore {
 public:
  static constexpr std::size_t kDefaultCapacity = 32;
  static constexpr int kThumbnailSide = 128;
  static constexpr int kMaxTicksPerRequest = 100000;

  SessionStore(std::shared_ptr<const Index> index, LayoutConfig layout = {},
               std::size_t capacity = kDefaultCapacity);

  struct Created {
    std::shared_ptr<Session> session;
    nlohmann::json result;
  };

  /// Runs the query and opens a session on its layout.
  Created create(std::span<const std::uint8_t> image_bytes, const QueryConfig& cfg = {});

  /// Throws UnknownSession.
  std::shared_ptr<Session> get(std::string_view id);

  nlohmann::json step(std::string_view id, int ticks);
  nlohmann::json frame(std::string_view id);
  nlohmann::json pin(std::string_view id, std::string_view particle, double x, double y);
  nlohmann::json release(std::string_view id, std::string_view particle);

  /// PNG bytes, longest side at most kThumbnailSide. Throws UnknownImage.
  std::vector<std::uint8_t> thumbnail(std::string_view image_id);

  const Index& index() const { return *index_; }
  std::size_t size() const;

 private:
  std::shared_ptr<const Index> index_;
  LayoutConfig layout_;
  std::size_t capacity_;

  mutable std::mutex mutex_;
  std::uint64_t next_id_ = 1;
  std::list<std::string> recency_;
  struct Entry {
    std::shared_ptr<Session> session;
    std::list<std::string>::iterator position;
  };
  std::map<std::string, Entry, std::less<>> sessions_;

  std::mutex thumb_mutex_;
  std::map<std::string, std::vector<std::uint8_t>, std::less<>> thumbs_;
};

}  // namespace geomir
