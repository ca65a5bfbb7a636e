// nojs-lint: static JavaScript-reliance analysis of saved pages.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nojs/nojs.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;

// Input problems (unreadable files, bad data) map to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

nojs::AnalyzerConfig config_from(const std::string& path) {
  return path.empty() ? nojs::AnalyzerConfig{} : nojs::load_config(path);
}

std::string default_url(const std::string& file) {
  return "file://" + std::filesystem::absolute(file).lexically_normal().string();
}

// A .json argument is taken as a saved FeatureReport, anything else as HTML.
nojs::FeatureReport load_report(const std::string& file, nojs::Variant variant, const std::string& url,
                                 const nojs::AnalyzerConfig& cfg) {
  std::string bytes = read_file(file);
  if (std::filesystem::path(file).extension() == ".json") {
    auto j = nlohmann::json::parse(bytes, nullptr, false);
    if (j.is_discarded()) throw InputError(file + " is not valid JSON");
    auto r = nojs::report_from_json(j);
    if (r.variant != variant) throw InputError(file + ": expected a " + std::string(to_string(variant)) + " report");
    return r;
  }
  return nojs::build_report(nojs::parse_document(bytes), variant, cfg, url);
}

std::vector<nojs::RequestRecord> load_log(const std::string& path, size_t& malformed) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  auto log = nojs::read_request_log(in);
  malformed += log.malformed_lines;
  return std::move(log.records);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static analysis of page breakage when JavaScript is disabled"};
  app.require_subcommand(1);

  std::string config_path;

  auto* inspect = app.add_subcommand("inspect", "Print the feature report of one HTML file");
  std::string inspect_file, inspect_url, inspect_variant = "nojs";
  bool inspect_verdicts = false;
  inspect->add_option("file", inspect_file, "HTML file")->required();
  inspect->add_option("--url", inspect_url, "Page URL recorded in the report");
  inspect->add_option("--config", config_path, "JSON config file");
  inspect->add_option("--variant", inspect_variant, "plain or nojs")->check(CLI::IsMember({"plain", "nojs"}));
  inspect->add_flag("--verdicts", inspect_verdicts, "Also list per-element verdicts");

  auto* compare = app.add_subcommand("compare", "Compare the plain and nojs variants of a page");
  std::string plain_file, nojs_file, compare_url;
  compare->add_option("--plain", plain_file, "HTML (or report .json) with scripts enabled")->required();
  compare->add_option("--nojs", nojs_file, "HTML (or report .json) with scripts disabled")->required();
  compare->add_option("--url", compare_url, "Page URL");
  compare->add_option("--config", config_path, "JSON config file");

  auto* corpus = app.add_subcommand("corpus", "Analyze a crawl corpus directory");
  std::string root, out_path, summary_path;
  unsigned jobs = 1;
  corpus->add_option("--root", root, "Corpus root")->required();
  corpus->add_option("--out", out_path, "Per-page results (JSONL)")->required();
  corpus->add_option("--summary", summary_path, "Corpus summary (JSON); stdout when omitted");
  corpus->add_option("--jobs", jobs, "Pages analyzed in parallel")->check(CLI::Range(1u, 1024u));
  corpus->add_option("--config", config_path, "JSON config file");

  auto* requests = app.add_subcommand("requests", "Summarize request logs of both variants");
  std::string plain_log, nojs_log, trackers_path, suffixes_path;
  requests->add_option("--plain-log", plain_log, "JSONL log with scripts enabled")->required();
  requests->add_option("--nojs-log", nojs_log, "JSONL log with scripts disabled")->required();
  requests->add_option("--trackers", trackers_path, "Tracker domain list")->required();
  requests->add_option("--suffixes", suffixes_path, "Public suffix list")->required();

  auto* trackers = app.add_subcommand("trackers", "Convert a Disconnect services.json to a domain list");
  std::string disconnect_path, trackers_out;
  trackers->add_option("--disconnect", disconnect_path, "Disconnect services.json")->required();
  trackers->add_option("--out", trackers_out, "Output file; stdout when omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*inspect) {
      auto cfg = config_from(config_path);
      auto variant = inspect_variant == "plain" ? nojs::Variant::plain : nojs::Variant::nojs;
      auto doc = nojs::parse_document(read_file(inspect_file));
      auto analysis = nojs::analyze_page(doc, cfg);
      auto report = nojs::tally_report(analysis.verdicts, variant,
                                       inspect_url.empty() ? default_url(inspect_file) : inspect_url);
      report.diagnostics = analysis.diagnostics;
      auto j = nojs::to_json(report);
      if (inspect_verdicts) {
        j["verdicts"] = nlohmann::json::array();
        for (const auto& v : analysis.verdicts)
          j["verdicts"].push_back({{"kind", to_string(v.kind)},
                                   {"broken", v.broken},
                                   {"visible", v.visible},
                                   {"in_main", v.in_main},
                                   {"node_path", v.node_path},
                                   {"detail", v.detail}});
      }
      std::cout << j.dump(2) << '\n';
    } else if (*compare) {
      auto cfg = config_from(config_path);
      std::string url = compare_url.empty() ? default_url(nojs_file) : compare_url;
      auto plain = load_report(plain_file, nojs::Variant::plain, url, cfg);
      auto nojs_report = load_report(nojs_file, nojs::Variant::nojs, url, cfg);
      std::cout << nojs::to_json(nojs::compare_pair(plain, nojs_report, cfg.visible_only)).dump(2) << '\n';
    } else if (*corpus) {
      auto cfg = config_from(config_path);
      std::ofstream out(out_path);
      if (!out) throw InputError("cannot write " + out_path);
      auto summary = nojs::run_corpus(root, cfg, &out, jobs);
      auto text = nojs::to_json(summary).dump(2);
      if (summary_path.empty()) {
        std::cout << text << '\n';
      } else {
        std::ofstream s(summary_path);
        if (!s) throw InputError("cannot write " + summary_path);
        s << text << '\n';
      }
    } else if (*requests) {
      size_t malformed = 0;
      auto plain = load_log(plain_log, malformed);
      auto nojs_records = load_log(nojs_log, malformed);
      auto list = nojs::TrackerList::parse(read_file(trackers_path));
      auto suffixes = nojs::SuffixTable::parse(read_file(suffixes_path));
      auto summary = nojs::summarize(plain, nojs_records, list, suffixes);
      auto j = nojs::to_json(summary);
      j["malformed_lines"] = malformed;
      std::cout << j.dump(2) << '\n';
    } else if (*trackers) {
      auto j = nlohmann::json::parse(read_file(disconnect_path), nullptr, false);
      if (j.is_discarded()) throw InputError(disconnect_path + " is not valid JSON");
      auto text = nojs::TrackerList::from_disconnect_json(j).to_text();
      if (trackers_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream o(trackers_out);
        if (!o) throw InputError("cannot write " + trackers_out);
        o << text;
      }
    }
  } catch (const nojs::PairingError& e) {
    std::cerr << "nojs-lint: " << e.what() << '\n';
    for (const auto& o : e.orphans()) std::cerr << "  " << o << '\n';
    return kExitInput;
  } catch (const nojs::Error& e) {
    std::cerr << "nojs-lint: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "nojs-lint: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "nojs-lint: " << e.what() << '\n';
    return kExitInput;
  }
  return 0;
}
