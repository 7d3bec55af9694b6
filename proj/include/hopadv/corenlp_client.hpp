#pragma once
// Live annotation backend: adapter for a CoreNLP HTTP server (with the
// openie annotator enabled). Connection details are configuration; use
// the fixture provider for anything that must run offline.

#include <string>

#include "hopadv/annotate.hpp"

namespace hopadv {

class CoreNlpClient : public AnnotationProvider {
 public:
  explicit CoreNlpClient(std::string base_url, int timeout_seconds = 30);

  std::string name() const override { return "corenlp"; }
  TextAnnotations annotate(const std::string& textstr) const override;

  // Parses a CoreNLP JSON response body (first sentence). Split out so
  // the mapping is testable without a server.
  static TextAnnotations parse_response(const std::string& body, const std::string& source_text);

 private:
  std::string host_;
  int port_ = 9000;
  int timeout_seconds_;
};

}  // namespace hopadv
