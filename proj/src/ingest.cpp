#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "replikit/ingest.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "replikit/io.hpp"

namespace replikit {

bool looks_like_doi(const std::string& s) {
  static const std::regex doi_re(R"(^10\.[0-9]{4,9}/\S+$)");
  return std::regex_match(s, doi_re);
}

std::string url_encode(std::string_view s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xF]);
    }
  }
  return out;
}

double SystemClock::now() {
  using namespace std::chrono;
  return duration<double>(steady_clock::now().time_since_epoch()).count();
}

void SystemClock::sleep_for(double seconds) {
  std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

struct HttplibGetter::Impl {
  std::unique_ptr<httplib::Client> plain;
  std::unique_ptr<httplib::SSLClient> tls;

  HttpResponse get(const std::string& path) {
    httplib::Result result = tls ? tls->Get(path) : plain->Get(path);
    if (!result) {
      throw std::runtime_error("http transport error: " + httplib::to_string(result.error()));
    }
    return {result->status, result->body};
  }
};

HttplibGetter::HttplibGetter(std::string host, int port, bool use_tls)
    : impl_(std::make_unique<Impl>()) {
  if (use_tls) {
    impl_->tls = std::make_unique<httplib::SSLClient>(host, port);
    impl_->tls->set_read_timeout(30, 0);
  } else {
    impl_->plain = std::make_unique<httplib::Client>(host, port);
    impl_->plain->set_read_timeout(30, 0);
  }
}

HttplibGetter::~HttplibGetter() = default;

HttpResponse HttplibGetter::get(const std::string& path_and_query) {
  return impl_->get(path_and_query);
}

CrossrefResolver::CrossrefResolver(HttpGetter& http, std::string mailto, Clock& clock)
    : http_(http), mailto_(std::move(mailto)), clock_(clock) {}

DoiResolution CrossrefResolver::resolve(const std::string& title) {
  if (title.empty()) throw InputError("resolve_doi: title must be nonempty");
  const std::string path = "/works?query.bibliographic=" + url_encode(title) +
                           "&rows=1&mailto=" + url_encode(mailto_);

  HttpResponse response;
  double backoff = 1.0;
  for (int attempt = 0;; ++attempt) {
    // <= 1 request per second, counted from the previous request start.
    const double wait = last_request_ + 1.0 - clock_.now();
    if (wait > 0.0) clock_.sleep_for(wait);
    last_request_ = clock_.now();

    response = http_.get(path);
    if (response.status == 429 || response.status >= 500) {
      if (attempt >= 5) {
        throw std::runtime_error("crossref: giving up after " + std::to_string(attempt + 1) +
                                 " attempts, last status " + std::to_string(response.status));
      }
      clock_.sleep_for(backoff);
      backoff *= 2.0;
      continue;
    }
    break;
  }
  if (response.status != 200) {
    throw std::runtime_error("crossref: unexpected status " + std::to_string(response.status));
  }

  DoiResolution resolution;
  resolution.query_title = title;
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(response.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("crossref: bad response: ") + e.what());
  }
  const auto items = obj.value("message", nlohmann::json::object())
                         .value("items", nlohmann::json::array());
  if (items.empty()) return resolution;  // no hits: absent doi
  const auto& hit = items.at(0);
  if (hit.contains("DOI")) {
    resolution.doi = hit["DOI"].get<std::string>();
  }
  resolution.match_score = hit.value("score", 0.0);
  if (hit.contains("title") && hit["title"].is_array() && !hit["title"].empty()) {
    resolution.resolved_title = hit["title"][0].get<std::string>();
  }
  return resolution;
}

DoiResolution resolve_doi(const std::string& title, const std::string& mailto) {
  static SystemClock clock;
  HttplibGetter getter("api.crossref.org", 443, true);
  CrossrefResolver resolver(getter, mailto, clock);
  return resolver.resolve(title);
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string run_capture(const std::string& command, int& exit_code) {
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run: " + command);
  std::string output;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
  const int status = pclose(pipe);
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return output;
}

std::string first_line(const std::string& s) {
  const auto pos = s.find('\n');
  return pos == std::string::npos ? s : s.substr(0, pos);
}

}  // namespace

ExtractedText extract_text(const std::string& pdf_path, const std::string& command_template) {
  if (!std::filesystem::exists(pdf_path)) {
    throw InputError("pdf not found: " + pdf_path);
  }
  std::string command = command_template;
  const std::string placeholder = "<in>";
  const auto pos = command.find(placeholder);
  if (pos == std::string::npos) {
    throw InputError("converter command lacks <in> placeholder: " + command_template);
  }
  command.replace(pos, placeholder.size(), shell_quote(pdf_path));

  static std::atomic<unsigned> counter{0};
  const std::string stderr_file =
      (std::filesystem::temp_directory_path() /
       ("replikit-pdf2text-" + std::to_string(::getpid()) + "-" +
        std::to_string(counter++) + ".err")).string();
  int exit_code = 0;
  std::string text = run_capture(command + " </dev/null 2>" + shell_quote(stderr_file), exit_code);
  std::string diagnostics;
  {
    std::ifstream err(stderr_file);
    std::ostringstream ss;
    ss << err.rdbuf();
    diagnostics = ss.str();
  }
  std::error_code ec;
  std::filesystem::remove(stderr_file, ec);

  if (exit_code != 0) {
    throw std::runtime_error("text converter exited with " + std::to_string(exit_code) +
                             ": " + first_line(diagnostics));
  }
  if (text.empty()) {
    std::cerr << "warning: converter produced no text for " << pdf_path << "\n";
  }

  // Provenance: the converter exe plus whatever `-v` reports, best effort.
  ExtractedText result;
  result.text = std::move(text);
  std::istringstream cmd_stream(command_template);
  std::string exe;
  cmd_stream >> exe;
  int version_exit = 0;
  const std::string version =
      first_line(run_capture(exe + " -v </dev/null 2>&1", version_exit));
  result.converter = version_exit == 0 && !version.empty() ? version : exe;
  return result;
}

void emit_manifest(const std::vector<PaperRecord>& records, const std::string& out_path) {
  validate_records(records);

  std::vector<const PaperRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& r : records) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(),
            [](const PaperRecord* a, const PaperRecord* b) { return a->id < b->id; });

  std::ostringstream out;
  for (const PaperRecord* record : ordered) {
    nlohmann::json obj;
    obj["id"] = record->id;
    obj["role"] = to_string(record->role);
    obj["title"] = record->title;
    obj["text_path"] = record->text_path;
    if (record->doi) obj["doi"] = *record->doi;
    if (record->outcome != Outcome::unknown) obj["outcome"] = to_string(record->outcome);
    if (record->different_data) obj["different_data"] = *record->different_data;
    if (record->new_methods) obj["new_methods"] = *record->new_methods;
    if (!record->replicates.empty()) obj["replicates"] = record->replicates;
    out << obj.dump() << '\n';
  }
  atomic_write(out_path, out.str());
}

}  // namespace replikit
