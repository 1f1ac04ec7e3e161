#include "qbench/backend.hpp"
#include "qbench/device.hpp"
#include "qbench/json_io.hpp"
#include "qbench/remote.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

namespace {
qbench::MockJobServer* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Job server speaking the qbench JSON protocol over a local simulator", "qbench_mock_server"};
  std::string device, host = "127.0.0.1";
  int port = 8080;
  std::uint64_t drift_seed = 0;
  qbench::MockServerOptions opts;
  app.add_option("--device", device, "Device model JSON; default is the built-in Starmon-5 model");
  app.add_option("--host", host)->capture_default_str();
  app.add_option("--port", port, "0 picks a free port")->capture_default_str();
  app.add_option("--drift-seed", drift_seed)->capture_default_str();
  app.add_option("--queued-polls", opts.queued_polls)->capture_default_str();
  app.add_option("--running-polls", opts.running_polls)->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    qbench::LocalBackend backend(device.empty() ? qbench::starmon5_reference_model() : qbench::load_device(device),
                                 drift_seed);
    qbench::MockJobServer server(backend, opts);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.start(host, port);
    std::cout << "listening on " << server.url() << std::endl;
    server.wait();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
