#include <csignal>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "specsel/service/http_server.hpp"
#include "specsel/service/service.hpp"

int main(int argc, char** argv) {
  CLI::App app{"specsel-server: HTTP API for interactive index selection"};
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file (keys: host, port, data_dir, workers, grid_file, registry_file, "
                 "default_k, default_seed, rfe_criterion); SPECSEL_* environment variables win");
  CLI11_PARSE(app, argc, argv);

  // Signals are handled by a dedicated thread so the server can be stopped
  // outside signal context.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    std::optional<std::filesystem::path> file;
    if (!config_path.empty()) file = config_path;
    specsel::Service service(specsel::load_service_config(file));
    for (const auto& e : service.load_errors()) std::cerr << "load error: " << e << "\n";

    specsel::HttpServer server(service);
    const auto& cfg = service.config();
    const int port = server.bind(cfg.host, cfg.port);
    std::cout << "listening on " << cfg.host << ":" << port << " (data " << cfg.data_dir.string()
              << ", " << cfg.workers << " workers)" << std::endl;

    std::thread waiter([&] {
      int sig = 0;
      sigwait(&signals, &sig);
      server.stop();
    });
    server.listen();
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    service.wait_idle();
  } catch (const specsel::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
