#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bootlex/pipeline.hpp"

namespace bootlex {

/// JSON-over-HTTP front end for review. Endpoints are listed in docs/api.md.
/// Handlers may run concurrently; every store write goes through the store's
/// own lock, and only one re-run may be in flight.
class Service {
 public:
  Service(std::vector<RawCorpusFile> corpus, Resources resources, KnowledgeStore& store,
          std::optional<std::filesystem::path> artifact_dir = std::nullopt);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Runs the pipeline once and publishes the result. Returns nullopt when a
  /// run is already in progress.
  std::optional<RunOutcome> rerun();
  bool running() const;

  /// Binds to `port` (0: any free port) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace bootlex
