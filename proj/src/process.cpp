#include "greenmine/process.hpp"

#include <atomic>
#include <boost/asio/io_context.hpp>
#include <boost/process.hpp>
#include <future>
#include <random>

#include "greenmine/error.hpp"

namespace greenmine::detail {

namespace bp = boost::process;

namespace {

std::string describe(const std::vector<std::string>& argv) {
  std::string out;
  for (const std::string& arg : argv) {
    if (!out.empty()) out += ' ';
    out += arg;
  }
  return out;
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& working_dir) {
  if (argv.empty()) throw ProcessError("empty command line");
  const boost::filesystem::path exe = bp::search_path(argv.front());
  if (exe.empty()) throw ProcessError("executable not found: " + argv.front());
  const std::vector<std::string> args(argv.begin() + 1, argv.end());
  const std::string dir = working_dir.empty() ? std::filesystem::current_path().string()
                                              : working_dir.string();

  boost::asio::io_context io;
  std::future<std::string> out;
  std::future<std::string> err;
  ProcessResult result;
  try {
    bp::child child(exe, bp::args(args), bp::start_dir(dir), bp::std_in.close(),
                    bp::std_out > out, bp::std_err > err, io);
    io.run();
    child.wait();
    result.exit_code = child.exit_code();
  } catch (const bp::process_error& e) {
    throw ProcessError("failed to run `" + describe(argv) + "`: " + e.what());
  }
  result.out = out.get();
  result.err = err.get();
  return result;
}

std::string run_checked(const std::vector<std::string>& argv,
                        const std::filesystem::path& working_dir) {
  ProcessResult result = run_process(argv, working_dir);
  if (result.exit_code != 0) {
    std::string message = "`" + describe(argv) + "` exited with status " +
                          std::to_string(result.exit_code);
    if (!result.err.empty()) message += ": " + result.err;
    while (!message.empty() && message.back() == '\n') message.pop_back();
    throw ProcessError(message);
  }
  return std::move(result.out);
}

TempDir::TempDir(const std::string& prefix) {
  static std::atomic<unsigned> counter{0};
  std::random_device entropy;
  const auto base = std::filesystem::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = base / (prefix + "-" + std::to_string(entropy()) + "-" +
                             std::to_string(counter.fetch_add(1)));
    if (std::filesystem::create_directory(candidate)) {
      path_ = std::move(candidate);
      return;
    }
  }
  throw Error("could not create a temporary directory under " + base.string());
}

TempDir::~TempDir() {
  std::error_code ignored;
  std::filesystem::remove_all(path_, ignored);
}

}  // namespace greenmine::detail
