#include <csignal>
#include <cstdio>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "ltpal/error.hpp"
#include "ltpal/mppe.hpp"

namespace ltpal {

struct ExternalScorer::Process {
  pid_t pid = -1;
  FILE* to_child = nullptr;
  FILE* from_child = nullptr;
  std::string command;
};

ExternalScorer::ExternalScorer(const std::string& command) : proc_(std::make_unique<Process>()) {
  proc_->command = command;
  int in[2];
  int out[2];
  if (pipe(in) != 0) throw ConfigError("cannot create pipe for scorer");
  if (pipe(out) != 0) {
    close(in[0]);
    close(in[1]);
    throw ConfigError("cannot create pipe for scorer");
  }
  pid_t pid = fork();
  if (pid < 0) throw ConfigError("cannot start scorer '" + command + "'");
  if (pid == 0) {
    dup2(in[0], STDIN_FILENO);
    dup2(out[1], STDOUT_FILENO);
    close(in[0]);
    close(in[1]);
    close(out[0]);
    close(out[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in[0]);
  close(out[1]);
  proc_->pid = pid;
  proc_->to_child = fdopen(in[1], "w");
  proc_->from_child = fdopen(out[0], "r");
  // A scorer that exits early must surface as an error, not kill us.
  std::signal(SIGPIPE, SIG_IGN);
}

ExternalScorer::~ExternalScorer() {
  if (proc_->to_child) fclose(proc_->to_child);
  if (proc_->from_child) fclose(proc_->from_child);
  if (proc_->pid > 0) {
    int status = 0;
    waitpid(proc_->pid, &status, 0);
  }
}

double ExternalScorer::operator()(const LabelSet& a, const LabelSet& b) {
  nlohmann::json request = {{"a", a}, {"b", b}};
  std::string line = request.dump() + "\n";
  if (std::fputs(line.c_str(), proc_->to_child) < 0 || std::fflush(proc_->to_child) != 0)
    throw ConfigError("scorer '" + proc_->command + "' stopped accepting requests");

  std::string reply;
  for (int c; (c = std::fgetc(proc_->from_child)) != EOF && c != '\n';) reply.push_back(static_cast<char>(c));
  if (reply.empty()) throw ConfigError("scorer '" + proc_->command + "' gave no reply");
  try {
    auto j = nlohmann::json::parse(reply);
    const auto& s = j.at("score");
    if (s.is_null()) throw ConfigError("scorer returned a null score");
    return s.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scorer reply '" + reply + "' is not {\"score\": number}");
  }
}

}  // namespace ltpal
