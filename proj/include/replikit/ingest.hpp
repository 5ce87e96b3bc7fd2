#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "replikit/corpus.hpp"

namespace replikit {

struct DoiResolution {
  std::string query_title;
  std::optional<std::string> doi;
  double match_score = 0.0;
  std::string resolved_title;  // stored for human audit of the top hit
};

// `10.<registrant>/<suffix>`
bool looks_like_doi(const std::string& s);

std::string url_encode(std::string_view s);

// Injectable time source so the rate limiter is testable.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual double now() = 0;  // seconds, monotonic
  virtual void sleep_for(double seconds) = 0;
};

class SystemClock : public Clock {
 public:
  double now() override;
  void sleep_for(double seconds) override;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

class HttpGetter {
 public:
  virtual ~HttpGetter() = default;
  virtual HttpResponse get(const std::string& path_and_query) = 0;
};

// cpp-httplib transport; https for the real API, plain http for local
// fixture servers.
class HttplibGetter : public HttpGetter {
 public:
  HttplibGetter(std::string host, int port = 443, bool tls = true);
  ~HttplibGetter() override;
  HttpResponse get(const std::string& path_and_query) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// GET /works?query.bibliographic=<title>&rows=1&mailto=<contact>, at most one
// request per second, exponential backoff on 429/5xx (max 5 retries).
class CrossrefResolver {
 public:
  CrossrefResolver(HttpGetter& http, std::string mailto, Clock& clock);

  DoiResolution resolve(const std::string& title);

 private:
  HttpGetter& http_;
  std::string mailto_;
  Clock& clock_;
  double last_request_ = -1e18;
};

// Convenience wrapper over the live Crossref API.
DoiResolution resolve_doi(const std::string& title, const std::string& mailto);

inline constexpr const char* kDefaultPdf2TextCmd = "pdftotext -enc UTF-8 <in> -";

struct ExtractedText {
  std::string text;
  std::string converter;  // provenance: command plus reported version
};

// Runs the converter command (the literal `<in>` is replaced by the quoted
// pdf path), capturing stdout as the text. A nonzero exit raises with the
// converter's diagnostics; empty output is kept with a warning so the
// 100-word filter can discard the record later.
ExtractedText extract_text(const std::string& pdf_path,
                           const std::string& command_template = kDefaultPdf2TextCmd);

// Line-delimited JSON manifest, records ordered by id. Validates the corpus
// invariants first and names the offending record on failure.
void emit_manifest(const std::vector<PaperRecord>& records, const std::string& out_path);

}  // namespace replikit
