#include <doctest.h>

#include <atomic>
#include <thread>

#include "geomir/error.hpp"
#include "geomir/http_server.hpp"
#include "geomir/session.hpp"
#include "support/fixtures.hpp"

// After Eigen: <resolv.h> defines a `_res` macro that collides with Eigen internals.
#include <httplib.h>

using namespace geomir;
using nlohmann::json;

namespace {

struct SharedFixture {
  geomir::testing::TempDir dir;
  geomir::testing::FixtureSet fixtures;
  std::shared_ptr<const Index> index;
  std::shared_ptr<const Index> single_country;

  SharedFixture() {
    fixtures = geomir::testing::write_fixture_set(dir.path(), 5, 11);
    auto built = std::make_shared<Index>(geomir::testing::build_fixture_index(fixtures));
    auto solo = std::make_shared<Index>(*built);
    for (auto& [id, record] : solo->geo) record = GeoRecord{id, "Solo", std::nullopt};
    index = std::move(built);
    single_country = std::move(solo);
  }

  std::vector<std::uint8_t> bytes(std::size_t i) const {
    return geomir::testing::read_file(fixtures.images.at(i).path);
  }
};

const SharedFixture& shared() {
  static const SharedFixture fixture;
  return fixture;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::IoError;
}

// Server on an ephemeral port, stopped on destruction.
class RunningServer {
 public:
  explicit RunningServer(std::shared_ptr<SessionStore> store) : server_(std::move(store)) {
    port_ = server_.bind("127.0.0.1", 0);
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.listen(); });
  }
  ~RunningServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(120, 0);
    return c;
  }

 private:
  HttpServer server_;
  int port_ = -1;
  std::thread thread_;
};

std::string session_of(httplib::Client& c, const std::vector<std::uint8_t>& image, const std::string& query = "") {
  httplib::MultipartFormDataItems items = {{"image", std::string(image.begin(), image.end()), "q.png", "image/png"}};
  const auto res = c.Post("/query" + query, items);
  REQUIRE(res);
  REQUIRE(res->status == 200);
  return json::parse(res->body).at("session").get<std::string>();
}

const json* particle(const json& frame, std::string_view id) {
  for (const auto& p : frame.at("particles")) {
    if (p.at("id") == id) return &p;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("http_status mapping") {
  CHECK(http_status(ErrorKind::UndecodableImage) == 400);
  CHECK(http_status(ErrorKind::CannotReleaseRoot) == 400);
  CHECK(http_status(ErrorKind::UnknownSession) == 404);
  CHECK(http_status(ErrorKind::UnknownParticle) == 404);
  CHECK(http_status(ErrorKind::UnknownImage) == 404);
  CHECK(http_status(ErrorKind::SessionBusy) == 409);
  CHECK(http_status(ErrorKind::EmptyIndex) == 422);
  CHECK(http_status(ErrorKind::IoError) == 500);
}

TEST_CASE("SessionStore basics") {
  const auto& fx = shared();
  SessionStore store(fx.index);
  const auto created = store.create(fx.bytes(0));
  const std::string id = created.session->id();
  CHECK(id == "s1");
  CHECK(created.result.at("draw_order").back() == fx.fixtures.images[0].id);
  CHECK(store.frame(id).at("step") == 0);
  CHECK(store.step(id, 5).at("step") == 5);
  CHECK(store.frame(id).at("step") == 5);

  const json pinned = store.pin(id, "root", 17.5, -3.25);
  CHECK(pinned.at("particles").at(0).at("x") == 17.5);
  CHECK(pinned.at("particles").at(0).at("y") == -3.25);

  CHECK(kind_of([&] { store.frame("s99"); }) == ErrorKind::UnknownSession);
  CHECK(kind_of([&] { store.pin(id, "image:none", 0, 0); }) == ErrorKind::UnknownParticle);
  CHECK(kind_of([&] { store.release(id, "root"); }) == ErrorKind::CannotReleaseRoot);
  CHECK(kind_of([&] { store.step(id, -1); }) == ErrorKind::InvalidConfig);
  CHECK(kind_of([&] { store.step(id, SessionStore::kMaxTicksPerRequest + 1); }) == ErrorKind::InvalidConfig);
  const std::vector<std::uint8_t> junk = {0, 1, 2};
  CHECK(kind_of([&] { store.create(junk); }) == ErrorKind::UndecodableImage);
}

TEST_CASE("SessionStore evicts the least recently used session") {
  const auto& fx = shared();
  SessionStore store(fx.index, {}, 2);
  const std::string a = store.create(fx.bytes(0)).session->id();
  const std::string b = store.create(fx.bytes(1)).session->id();
  store.frame(a);  // a is now the most recent
  const std::string c = store.create(fx.bytes(2)).session->id();
  CHECK(store.size() == 2);
  CHECK_NOTHROW(store.frame(a));
  CHECK_NOTHROW(store.frame(c));
  CHECK(kind_of([&] { store.frame(b); }) == ErrorKind::UnknownSession);
}

TEST_CASE("thumbnails") {
  const auto& fx = shared();
  SessionStore store(fx.index);
  const auto png = store.thumbnail(fx.fixtures.images[3].id);
  const RgbImage thumb = decode_image(png);
  CHECK(std::max(thumb.width, thumb.height) == SessionStore::kThumbnailSide);
  // Portrait fixture stays portrait.
  CHECK(thumb.height > thumb.width);
  CHECK(store.thumbnail(fx.fixtures.images[3].id) == png);
  CHECK(kind_of([&] { store.thumbnail("nope"); }) == ErrorKind::UnknownImage);
}

TEST_CASE("sessions are isolated") {
  const auto& fx = shared();
  SessionStore alone(fx.index);
  const std::string solo = alone.create(fx.bytes(4)).session->id();
  std::vector<std::string> expected;
  for (int i = 0; i < 5; ++i) expected.push_back(alone.step(solo, 7).dump());

  SessionStore mixed(fx.index);
  const std::string a = mixed.create(fx.bytes(1)).session->id();
  const std::string b = mixed.create(fx.bytes(4)).session->id();
  const std::string some_image = "image:" + mixed.get(a)->result().draw_order.front();
  for (int i = 0; i < 5; ++i) {
    mixed.step(a, 3);
    mixed.pin(a, some_image, 10.0 * i, 5.0);
    CHECK(mixed.step(b, 7).dump() == expected[static_cast<std::size_t>(i)]);
    mixed.release(a, some_image);
  }
}

TEST_CASE("concurrent mutation of one session is rejected") {
  const auto& fx = shared();
  QueryConfig wide;
  wide.radius = 9;
  SessionStore store(fx.index);
  const auto session = store.create(fx.bytes(0), wide).session;
  REQUIRE(session->result().images.size() == fx.index->size());

  std::atomic<bool> done = false;
  std::thread long_step([&] {
    // The probing pin below may hold the lock first; retry until the long step runs.
    while (kind_of([&] { session->step(SessionStore::kMaxTicksPerRequest); }) == ErrorKind::SessionBusy) {
    }
    done = true;
  });
  bool saw_busy = false;
  while (!done && !saw_busy) {
    saw_busy = kind_of([&] { session->pin("root", 600, 400); }) == ErrorKind::SessionBusy;
    // Frames stay readable while the writer runs.
    CHECK(session->frame() != nullptr);
  }
  long_step.join();
  CHECK(saw_busy);
  CHECK(session->frame()->at("step").get<int>() >= SessionStore::kMaxTicksPerRequest);
}

TEST_CASE("HTTP endpoints") {
  const auto& fx = shared();
  auto store = std::make_shared<SessionStore>(fx.index);
  RunningServer server(store);
  httplib::Client c = server.client();

  SUBCASE("health") {
    const auto res = c.Get("/healthz");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body).at("images") == fx.index->size());
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
  }
  SUBCASE("query, step, pin, release") {
    const auto image = fx.bytes(2);
    httplib::MultipartFormDataItems items = {{"image", std::string(image.begin(), image.end()), "q.png", "image/png"}};
    const auto res = c.Post("/query?radius=1&top=50", items);
    REQUIRE(res);
    REQUIRE(res->status == 200);
    const json body = json::parse(res->body);
    const std::string id = body.at("session");
    CHECK(body.at("result").at("draw_order").back() == fx.fixtures.images[2].id);
    CHECK(body.at("frame").at("step") == 0);

    auto step = c.Post("/session/" + id + "/step?n=10", "", "application/json");
    REQUIRE(step);
    CHECK(step->status == 200);
    CHECK(json::parse(step->body).at("step") == 10);

    const std::string target = "image:" + fx.fixtures.images[2].id;
    auto pin = c.Post("/session/" + id + "/pin", json{{"particle", target}, {"x", 123.25}, {"y", 77.5}}.dump(),
                      "application/json");
    REQUIRE(pin);
    CHECK(pin->status == 200);
    c.Post("/session/" + id + "/step?n=25", "", "application/json");
    const auto frame = c.Get("/session/" + id + "/frame");
    REQUIRE(frame);
    const json f = json::parse(frame->body);
    CHECK(f.at("step") == 35);
    const json* p = particle(f, target);
    REQUIRE(p != nullptr);
    CHECK(p->at("x") == 123.25);
    CHECK(p->at("y") == 77.5);

    auto rel = c.Post("/session/" + id + "/release", json{{"particle", target}}.dump(), "application/json");
    REQUIRE(rel);
    CHECK(rel->status == 200);

    auto root = c.Post("/session/" + id + "/release", json{{"particle", "root"}}.dump(), "application/json");
    REQUIRE(root);
    CHECK(root->status == 400);
    CHECK(json::parse(root->body).at("error") == "CannotReleaseRoot");

    auto ghost = c.Post("/session/" + id + "/pin", json{{"particle", "image:ghost"}, {"x", 1}, {"y", 2}}.dump(),
                        "application/json");
    REQUIRE(ghost);
    CHECK(ghost->status == 404);

    auto malformed = c.Post("/session/" + id + "/pin", "{oops", "application/json");
    REQUIRE(malformed);
    CHECK(malformed->status == 400);

    auto bad_n = c.Post("/session/" + id + "/step?n=abc", "", "application/json");
    REQUIRE(bad_n);
    CHECK(bad_n->status == 400);
  }
  SUBCASE("raw body upload") {
    const auto image = fx.bytes(1);
    const auto res = c.Post("/query", std::string(image.begin(), image.end()), "image/png");
    REQUIRE(res);
    CHECK(res->status == 200);
  }
  SUBCASE("error statuses") {
    const auto junk = c.Post("/query", "not an image", "application/octet-stream");
    REQUIRE(junk);
    CHECK(junk->status == 400);
    CHECK(json::parse(junk->body).at("error") == "UndecodableImage");

    const auto missing = c.Get("/session/s404/frame");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    CHECK(json::parse(missing->body).at("error") == "UnknownSession");

    const auto thumb = c.Get("/thumb/nope");
    REQUIRE(thumb);
    CHECK(thumb->status == 404);
  }
  SUBCASE("thumbnail") {
    const auto res = c.Get("/thumb/" + fx.fixtures.images[0].id);
    REQUIRE(res);
    REQUIRE(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "image/png");
    const RgbImage thumb = decode_image(std::vector<std::uint8_t>(res->body.begin(), res->body.end()));
    CHECK(std::max(thumb.width, thumb.height) <= 128);
  }
}

TEST_CASE("HTTP single-country session settles at the rest length") {
  const auto& fx = shared();
  RunningServer server(std::make_shared<SessionStore>(fx.single_country));
  httplib::Client c = server.client();
  const std::string id = session_of(c, fx.bytes(0), "?top=4");
  const auto res = c.Post("/session/" + id + "/step?n=2000", "", "application/json");
  REQUIRE(res);
  const json frame = json::parse(res->body);
  const json* root = particle(frame, "root");
  const json* country = particle(frame, "country:Solo");
  REQUIRE(root != nullptr);
  REQUIRE(country != nullptr);
  const double dx = country->at("x").get<double>() - root->at("x").get<double>();
  const double dy = country->at("y").get<double>() - root->at("y").get<double>();
  CHECK(std::abs(std::hypot(dx, dy) - LayoutConfig{}.rest_root_country) <= 1.0);
}

TEST_CASE("HTTP concurrent mutation returns 409") {
  const auto& fx = shared();
  RunningServer server(std::make_shared<SessionStore>(fx.index));
  httplib::Client c = server.client();
  const std::string id = session_of(c, fx.bytes(0), "?radius=9");
  std::atomic<bool> done = false;
  std::thread long_step([&] {
    httplib::Client slow = server.client();
    for (;;) {
      const auto res = slow.Post("/session/" + id + "/step?n=100000", "", "application/json");
      if (!res || res->status != 409) break;
    }
    done = true;
  });
  bool saw_409 = false;
  while (!done && !saw_409) {
    const auto res = c.Post("/session/" + id + "/pin", json{{"particle", "root"}, {"x", 600}, {"y", 400}}.dump(),
                            "application/json");
    REQUIRE(res);
    saw_409 = res->status == 409;
    if (saw_409) CHECK(json::parse(res->body).at("error") == "SessionBusy");
  }
  long_step.join();
  CHECK(saw_409);
}

TEST_CASE("identical command scripts give identical frame streams") {
  const auto& fx = shared();
  auto run = [&] {
    RunningServer server(std::make_shared<SessionStore>(fx.index));
    httplib::Client c = server.client();
    std::vector<std::string> frames;
    const std::string id = session_of(c, fx.bytes(5));
    const std::string target = "image:" + fx.fixtures.images[5].id;
    auto post = [&](const std::string& path, const std::string& body) {
      const auto res = c.Post("/session/" + id + path, body, "application/json");
      REQUIRE(res);
      REQUIRE(res->status == 200);
      frames.push_back(res->body);
    };
    for (int i = 0; i < 5; ++i) post("/step?n=20", "");
    post("/pin", json{{"particle", target}, {"x", 100.5}, {"y", 200.25}}.dump());
    for (int i = 0; i < 5; ++i) post("/step?n=20", "");
    post("/release", json{{"particle", target}}.dump());
    for (int i = 0; i < 5; ++i) post("/step?n=20", "");
    return frames;
  };
  const auto first = run();
  const auto second = run();
  CHECK(first.size() == 17);
  CHECK(first == second);
}
