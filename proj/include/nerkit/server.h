#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "nerkit/adjudication.h"

namespace nerkit {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> static_dir;
};

// HTTP JSON API over an AdjudicationSession, mounted under /api/v1:
//
//   GET  /disagreements?undecided=&page=&page_size=&domain=&format=&pattern=
//   GET  /disagreements/{diff_id}
//   POST /decisions        {diff_id, chosen_label, chooser, note}
//   GET  /progress
//   GET  /export           application/x-ndjson
class AdjudicationServer {
 public:
  AdjudicationServer(AdjudicationSession& session, ServerOptions options);
  ~AdjudicationServer();

  // Binds the socket; returns the bound port. Throws Error(kIo) on failure.
  int bind();
  // Serves until stop() is called. bind() must have succeeded.
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nerkit
