// qpp-tool: key generation, file encryption, ENT randomness analysis,
// throughput benchmarks and the nested tunnel client/server.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "qpp/bench.hpp"
#include "qpp/cipher.hpp"
#include "qpp/ent.hpp"
#include "qpp/net.hpp"
#include "qpp/tunnel.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitAuth = 3;
constexpr int kExitIo = 4;

qpp::Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qpp::IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  return qpp::Bytes(s.begin(), s.end());
}

void write_file(const std::string& path, const qpp::Bytes& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw qpp::IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw qpp::IoError("write to " + path + " failed");
}

std::array<uint8_t, 32> load_key(const std::string& path) {
  qpp::Bytes data = read_file(path);
  if (data.size() != 32)
    throw qpp::ParamError("key file " + path + " must be exactly 32 bytes");
  std::array<uint8_t, 32> key;
  std::copy(data.begin(), data.end(), key.begin());
  return key;
}

qpp::Bytes random_bytes(size_t n) {
  std::random_device rd;
  qpp::Bytes out(n);
  for (auto& b : out) b = static_cast<uint8_t>(rd());
  return out;
}

bool demo_ack_from_env() {
  const char* v = std::getenv("QPP_DEMO_ACK");
  return v != nullptr && std::string(v) == "1";
}

int cmd_keygen(const std::string& out_path, const std::string& seed_hex) {
  qpp::Bytes key;
  if (!seed_hex.empty()) {
    qpp::Bytes seed = qpp::from_hex(seed_hex);
    key = qpp::hkdf_sha256(seed, {}, qpp::to_bytes("QPP/keygen/v1"), 32);
  } else {
    key = random_bytes(32);
  }
  write_file(out_path, key);
  return kExitOk;
}

int cmd_crypt(bool encrypt, const std::string& key_path, const std::string& in_path,
              const std::string& out_path, unsigned n, unsigned m, uint64_t seq) {
  auto session =
      qpp::CipherSession::from_key(qpp::SessionKey{load_key(key_path)}, n, m);
  qpp::Bytes input = read_file(in_path);
  qpp::Bytes output = encrypt ? session.encrypt_record(seq, input)
                              : session.decrypt_record(seq, input);
  write_file(out_path, output);
  return kExitOk;
}

int cmd_ent(const std::string& in_path, bool json_output) {
  qpp::Bytes data = read_file(in_path);
  if (data.empty()) throw qpp::ParamError("ent: input file is empty");
  qpp::ent::EntReport r = qpp::ent::analyze(data);
  if (json_output) {
    nlohmann::json j;
    j["byte_count"] = r.byte_count;
    j["entropy"] = r.entropy;
    j["chi_square"] = r.chi_square;
    j["p_value"] = r.p_value;
    j["mean"] = r.mean;
    if (r.monte_carlo_pi) {
      j["monte_carlo_pi"] = *r.monte_carlo_pi;
    } else {
      j["monte_carlo_pi"] = nullptr;
      j["monte_carlo_pi_reason"] = r.monte_carlo_pi_reason;
    }
    if (r.serial_correlation) {
      j["serial_correlation"] = *r.serial_correlation;
    } else {
      j["serial_correlation"] = nullptr;
      j["serial_correlation_reason"] = r.serial_correlation_reason;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "Bytes              " << r.byte_count << "\n";
    std::cout << "Entropy (bits)     " << r.entropy << "\n";
    std::cout << "Chi Square         " << r.chi_square << "\n";
    std::cout << "p-Value            " << r.p_value << "\n";
    std::cout << "Arithmetic Mean    " << r.mean << "\n";
    if (r.monte_carlo_pi)
      std::cout << "Monte Carlo pi     " << *r.monte_carlo_pi << "\n";
    else
      std::cout << "Monte Carlo pi     n/a (" << r.monte_carlo_pi_reason << ")\n";
    if (r.serial_correlation)
      std::cout << "Serial Correlation " << *r.serial_correlation << "\n";
    else
      std::cout << "Serial Correlation n/a (" << r.serial_correlation_reason << ")\n";
  }
  return kExitOk;
}

int cmd_bench(unsigned size_mb, unsigned repeat, unsigned threads,
              const std::string& csv_path) {
  qpp::BenchOptions options;
  options.buffer_bytes = static_cast<size_t>(size_mb) * 1024 * 1024;
  options.repeat = repeat;
  options.threads = threads;
  qpp::BenchReport report = qpp::run_bench(options);

  std::cout << "name                  bytes        seconds    MB/s\n";
  for (const auto& row : report.rows) {
    std::cout << row.name;
    for (size_t i = row.name.size(); i < 22; ++i) std::cout << ' ';
    std::cout << row.bytes << "  " << row.seconds << "  " << row.mb_per_s << "\n";
  }
  std::cout << "qpp_vs_aes ratio:      " << report.qpp_vs_aes << "\n";
  std::cout << "nested_vs_aes_only:    " << report.nested_vs_aes_only << "\n";
  std::cout << "handshakes_per_second: " << report.handshakes_per_second << "\n";
  if (!csv_path.empty())
    write_file(csv_path, qpp::to_bytes(qpp::bench_csv(report)));
  return kExitOk;
}

qpp::TunnelOptions tunnel_options(const std::string& outer,
                                  const std::string& key_path, unsigned n,
                                  unsigned m, bool insecure_demo) {
  qpp::TunnelOptions options;
  options.pad_n = n;
  options.pad_m = m;
  options.insecure_demo = insecure_demo || demo_ack_from_env();
  if (!options.insecure_demo)
    throw qpp::ParamError(
        "the tunnel uses a mock KEM with NO security; pass --insecure-demo "
        "or set QPP_DEMO_ACK=1 to acknowledge");
  if (outer == "aes") {
    options.outer = qpp::OuterMode::kAes;
    if (key_path.empty())
      throw qpp::ParamError("--outer aes requires --key with the shared outer key");
    options.outer_key = load_key(key_path);
  } else if (outer != "none") {
    throw qpp::ParamError("--outer must be 'none' or 'aes'");
  }
  return options;
}

qpp::TunnelSource stdin_source() {
  return [](uint8_t* buf, size_t len) -> size_t {
    std::cin.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(len));
    return static_cast<size_t>(std::cin.gcount());
  };
}

qpp::TunnelSink stdout_sink() {
  return [](const uint8_t* data, size_t len) {
    std::cout.write(reinterpret_cast<const char*>(data),
                    static_cast<std::streamsize>(len));
    std::cout.flush();
  };
}

int cmd_serve(const std::string& listen_spec, const qpp::TunnelOptions& options,
              unsigned timeout_s, bool once) {
  std::cerr << "WARNING: mock-KEM handshake, demo only, NOT secure\n";
  qpp::Socket listener = qpp::tcp_listen(qpp::parse_host_port(listen_spec));
  do {
    qpp::Socket conn = qpp::tcp_accept(listener);
    qpp::TcpWireStream wire(std::move(conn), timeout_s);
    qpp::run_tunnel_server(wire, options, stdin_source(), stdout_sink());
  } while (!once);
  return kExitOk;
}

int cmd_connect(const std::string& target_spec, const qpp::TunnelOptions& options,
                unsigned timeout_s) {
  std::cerr << "WARNING: mock-KEM handshake, demo only, NOT secure\n";
  qpp::Socket conn = qpp::tcp_connect(qpp::parse_host_port(target_spec));
  qpp::TcpWireStream wire(std::move(conn), timeout_s);
  qpp::run_tunnel_client(wire, options, stdin_source(), stdout_sink());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum permutation pad toolkit"};
  app.require_subcommand(1);

  // keygen
  auto* keygen = app.add_subcommand("keygen", "write a 32-byte key file");
  std::string keygen_out, keygen_seed;
  keygen->add_option("--out", keygen_out, "output path")->required();
  keygen->add_option("--seed", keygen_seed, "hex seed for deterministic keys (test mode)");

  // encrypt / decrypt
  std::string crypt_key, crypt_in, crypt_out;
  unsigned crypt_n = 8, crypt_m = 64;
  uint64_t crypt_seq = 0;
  auto add_crypt_opts = [&](CLI::App* cmd) {
    cmd->add_option("--key", crypt_key, "32-byte key file")->required();
    cmd->add_option("--in", crypt_in, "input path")->required();
    cmd->add_option("--out", crypt_out, "output path")->required();
    cmd->add_option("--n", crypt_n, "bits per symbol (4 or 8)");
    cmd->add_option("--M", crypt_m, "gate count");
    cmd->add_option("--seq", crypt_seq, "record sequence number");
  };
  auto* encrypt = app.add_subcommand("encrypt", "QPP-encrypt a file");
  add_crypt_opts(encrypt);
  auto* decrypt = app.add_subcommand("decrypt", "QPP-decrypt a file");
  add_crypt_opts(decrypt);

  // ent
  auto* ent = app.add_subcommand("ent", "randomness statistics of a file");
  std::string ent_in;
  bool ent_json = false;
  ent->add_option("--in", ent_in, "input path")->required();
  ent->add_flag("--json", ent_json, "emit JSON");

  // bench
  auto* bench = app.add_subcommand("bench", "throughput benchmark");
  unsigned bench_size = 16, bench_repeat = 3, bench_threads = 1;
  std::string bench_csv;
  bench->add_option("--size", bench_size, "buffer size in MB")
      ->check(CLI::Range(1u, 4096u));
  bench->add_option("--repeat", bench_repeat, "timed iterations");
  bench->add_option("--threads", bench_threads, "encrypt threads");
  bench->add_option("--csv", bench_csv, "write CSV to this path");

  // serve / connect
  std::string net_addr, net_outer = "none", net_key;
  unsigned net_n = 8, net_m = 64, net_timeout = 30;
  bool net_insecure = false, serve_once = false;
  auto add_net_opts = [&](CLI::App* cmd) {
    cmd->add_option("--outer", net_outer, "outer layer: none or aes");
    cmd->add_option("--key", net_key, "shared outer key file (aes mode)");
    cmd->add_option("--n", net_n, "bits per symbol");
    cmd->add_option("--M", net_m, "gate count");
    cmd->add_option("--timeout", net_timeout, "read timeout seconds");
    cmd->add_flag("--insecure-demo", net_insecure,
                  "acknowledge that the mock-KEM handshake is insecure");
  };
  auto* serve = app.add_subcommand("serve", "tunnel server (relays stdin/stdout)");
  serve->add_option("--listen", net_addr, "addr:port")->required();
  serve->add_flag("--once", serve_once, "exit after one connection");
  add_net_opts(serve);
  auto* connect = app.add_subcommand("connect", "tunnel client (relays stdin/stdout)");
  connect->add_option("--target", net_addr, "addr:port")->required();
  add_net_opts(connect);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (keygen->parsed()) return cmd_keygen(keygen_out, keygen_seed);
    if (encrypt->parsed())
      return cmd_crypt(true, crypt_key, crypt_in, crypt_out, crypt_n, crypt_m, crypt_seq);
    if (decrypt->parsed())
      return cmd_crypt(false, crypt_key, crypt_in, crypt_out, crypt_n, crypt_m, crypt_seq);
    if (ent->parsed()) return cmd_ent(ent_in, ent_json);
    if (bench->parsed())
      return cmd_bench(bench_size, bench_repeat, bench_threads, bench_csv);
    if (serve->parsed())
      return cmd_serve(net_addr,
                       tunnel_options(net_outer, net_key, net_n, net_m, net_insecure),
                       net_timeout, serve_once);
    if (connect->parsed())
      return cmd_connect(net_addr,
                         tunnel_options(net_outer, net_key, net_n, net_m, net_insecure),
                         net_timeout);
  } catch (const qpp::AuthError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAuth;
  } catch (const qpp::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const qpp::ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
