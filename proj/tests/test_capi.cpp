#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "qsid/qsid.h"

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qsid_capi_" + name)).string();
}

qsid_identify_options quick_options(const char* method) {
  qsid_identify_options opts;
  qsid_identify_options_default(&opts);
  opts.method = method;
  opts.hops = 5;
  opts.seed = 2;
  return opts;
}

}  // namespace

TEST_CASE("defaults and version") {
  CHECK(std::string(qsid_version()).size() > 0);
  qsid_generate_options g;
  qsid_generate_options_default(&g);
  CHECK(g.n == 2);
  CHECK(g.steps == 49);
  CHECK(g.dt == 0.1);
  qsid_identify_options o;
  qsid_identify_options_default(&o);
  CHECK(std::string(o.method) == "pade");
  CHECK(o.hops == 30);
  CHECK(o.g_tol == 1e-6);
}

TEST_CASE("series lifecycle") {
  qsid_generate_options g;
  qsid_generate_options_default(&g);
  g.seed = 7;
  g.noise_weight = 0.05;
  qsid_series* exact = nullptr;
  qsid_series* noisy = nullptr;
  REQUIRE(qsid_series_generate(&g, &exact, &noisy) == QSID_OK);
  CHECK(std::string(qsid_last_error()).empty());

  size_t dim = 0;
  size_t steps = 0;
  double dt = 0.0;
  REQUIRE(qsid_series_info(noisy, &dim, &steps, &dt) == QSID_OK);
  CHECK(dim == 2);
  CHECK(steps == 49);
  CHECK(dt == 0.1);

  std::vector<double> buf(8);
  REQUIRE(qsid_series_state(exact, 0, buf.data(), buf.size()) == QSID_OK);
  CHECK(buf[0] + buf[6] == doctest::Approx(1.0));  // Re rho_00 + Re rho_11
  CHECK(buf[1] == 0.0);
  CHECK(qsid_series_state(exact, 50, buf.data(), buf.size()) == QSID_ERR_INVALID_ARGUMENT);
  CHECK(qsid_series_state(exact, 0, buf.data(), 4) == QSID_ERR_INVALID_ARGUMENT);
  CHECK(std::string(qsid_last_error()).find("buffer") != std::string::npos);

  double f = 0.0;
  REQUIRE(qsid_min_fidelity(exact, exact, &f) == QSID_OK);
  CHECK(f == doctest::Approx(1.0).epsilon(1e-10));
  REQUIRE(qsid_min_fidelity(exact, noisy, &f) == QSID_OK);
  CHECK(f < 1.0);

  const std::string path = temp_path("series.json");
  REQUIRE(qsid_series_write(noisy, path.c_str()) == QSID_OK);
  qsid_series* back = nullptr;
  REQUIRE(qsid_series_read(path.c_str(), &back) == QSID_OK);
  std::vector<double> a(8);
  std::vector<double> b(8);
  for (size_t i = 0; i <= 49; ++i) {
    qsid_series_state(noisy, i, a.data(), a.size());
    qsid_series_state(back, i, b.data(), b.size());
    CHECK(a == b);
  }
  qsid_series_free(back);
  std::filesystem::remove(path);

  qsid_series_free(exact);
  qsid_series_free(noisy);
  qsid_series_free(nullptr);
}

TEST_CASE("errors map to status codes") {
  qsid_series* s = nullptr;
  CHECK(qsid_series_read(temp_path("does_not_exist.json").c_str(), &s) == QSID_ERR_IO);
  CHECK(std::string(qsid_last_error()).size() > 0);
  CHECK(s == nullptr);

  const std::string bad = temp_path("bad.json");
  {
    std::FILE* fp = std::fopen(bad.c_str(), "w");
    std::fputs("{\"version\": 1}", fp);
    std::fclose(fp);
  }
  CHECK(qsid_series_read(bad.c_str(), &s) == QSID_ERR_SCHEMA);
  CHECK(qsid_model_read(bad.c_str(), nullptr) == QSID_ERR_INVALID_ARGUMENT);
  qsid_model* m = nullptr;
  CHECK(qsid_model_read(bad.c_str(), &m) == QSID_ERR_SCHEMA);
  std::filesystem::remove(bad);

  qsid_generate_options g;
  qsid_generate_options_default(&g);
  g.noise_weight = 1.5;
  CHECK(qsid_series_generate(&g, &s, nullptr) == QSID_ERR_INVALID_ARGUMENT);
  CHECK(qsid_series_generate(nullptr, &s, nullptr) == QSID_ERR_INVALID_ARGUMENT);
  CHECK(std::string(qsid_last_error()).find("NULL") != std::string::npos);

  CHECK(qsid_experiment_run("{not json", temp_path("x.jsonl").c_str(), nullptr) == QSID_ERR_SCHEMA);
  CHECK(qsid_experiment_run("{\"bogus\": 1}", temp_path("x.jsonl").c_str(), nullptr) == QSID_ERR_SCHEMA);

  // A successful call clears the message.
  qsid_generate_options_default(&g);
  qsid_series* ok = nullptr;
  REQUIRE(qsid_series_generate(&g, nullptr, &ok) == QSID_OK);
  CHECK(std::string(qsid_last_error()).empty());

  qsid_identify_options opts = quick_options("euler");
  qsid_model* model = nullptr;
  CHECK(qsid_identify(ok, &opts, &model) == QSID_ERR_INVALID_ARGUMENT);
  CHECK(model == nullptr);
  qsid_series_free(ok);
}

TEST_CASE("identify, serialize and re-propagate") {
  qsid_generate_options g;
  qsid_generate_options_default(&g);
  g.seed = 3;
  qsid_series* exact = nullptr;
  REQUIRE(qsid_series_generate(&g, &exact, nullptr) == QSID_OK);

  for (const char* method : {"pade", "kraus"}) {
    INFO(method);
    const qsid_identify_options opts = quick_options(method);
    qsid_model* model = nullptr;
    REQUIRE(qsid_identify(exact, &opts, &model) == QSID_OK);
    int converged = 0;
    double value = -1.0;
    double grad = -1.0;
    double residual = 0.0;
    REQUIRE(qsid_model_info(model, &converged, &value, &grad, &residual) == QSID_OK);
    CHECK(value >= 0.0);
    if (converged) CHECK(grad <= opts.g_tol);
    CHECK(std::isnan(residual) == (std::string(method) == "pade"));

    char* json = nullptr;
    REQUIRE(qsid_model_to_json(model, &json) == QSID_OK);
    CHECK(std::string(json).find("\"kind\"") != std::string::npos);
    qsid_string_free(json);

    const std::string path = temp_path(std::string(method) + "_model.json");
    REQUIRE(qsid_model_write(model, path.c_str()) == QSID_OK);
    qsid_model* back = nullptr;
    REQUIRE(qsid_model_read(path.c_str(), &back) == QSID_OK);
    std::filesystem::remove(path);

    qsid_series* sid = nullptr;
    REQUIRE(qsid_model_repropagate(back, exact, &sid) == QSID_OK);
    double f = 0.0;
    REQUIRE(qsid_min_fidelity(exact, sid, &f) == QSID_OK);
    CHECK(f >= 0.99);
    qsid_series_free(sid);
    qsid_model_free(back);
    qsid_model_free(model);
  }
  qsid_series_free(exact);
}

TEST_CASE("experiment and report") {
  const std::string records = temp_path("records.jsonl");
  const std::string csv_path = temp_path("summary.csv");
  const char* config =
      "{\"methods\": [\"pade\"], \"noise_grid\": [0.0], \"trials\": 2, \"workers\": 1,"
      " \"optimizer\": {\"hops\": 2}}";
  char* csv = nullptr;
  REQUIRE(qsid_experiment_run(config, records.c_str(), &csv) == QSID_OK);
  const std::string summary(csv);
  qsid_string_free(csv);
  CHECK(summary.find("\npade,0,2,") != std::string::npos);

  char* again = nullptr;
  REQUIRE(qsid_report(records.c_str(), csv_path.c_str(), &again) == QSID_OK);
  CHECK(std::string(again) == summary);
  qsid_string_free(again);
  CHECK(qsid_report(records.c_str(), csv_path.c_str(), nullptr) == QSID_OK);
  std::filesystem::remove(records);
  std::filesystem::remove(csv_path);
}
