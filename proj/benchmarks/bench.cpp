#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "rcms/certmodel.hpp"
#include "rcms/codegen.hpp"
#include "rcms/sim/scenario.hpp"

using namespace rcms;

namespace {

Certificate bench_cert(const char* subject, const char* issuer, const char* pub,
                       const char* signer_pub, bool is_ca) {
  Certificate cert;
  cert.serial = "0001";
  cert.subject = subject;
  cert.issuer = issuer;
  cert.public_key = keypair_from_public(to_bytes(pub)).public_key;
  cert.not_before = 1700000000;
  cert.not_after = 2000000000;
  cert.is_ca = is_ca;
  return sign_certificate(std::move(cert), keypair_from_public(to_bytes(signer_pub)));
}

CertificateChain bench_chain() {
  return {bench_cert("radius.bench.example", "Bench Intermediate", "bench-leaf", "bench-int", false),
          bench_cert("Bench Intermediate", "Bench Root", "bench-int", "bench-root", true),
          bench_cert("Bench Root", "Bench Root", "bench-root", "bench-root", true)};
}

void BM_VerificationCode(benchmark::State& state) {
  const Password password = Password::from_utf8("Kx9#vT2!qPwL");
  const PublicKeyBytes key{to_bytes("RCMS-TEST-ROOT-KEY-1")};
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_verification_code(password, key));
  }
}
BENCHMARK(BM_VerificationCode);

void BM_CodeCheck(benchmark::State& state) {
  const Password password = Password::from_utf8("Kx9#vT2!qPwL");
  const PublicKeyBytes key{to_bytes("RCMS-TEST-ROOT-KEY-1")};
  const std::string typed = compute_verification_code(password, key).text();
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_verification_code(typed, password, key));
  }
}
BENCHMARK(BM_CodeCheck);

void BM_CanonicalEncode(benchmark::State& state) {
  const Certificate cert = bench_chain().front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(canonical_encode(cert, true));
  }
}
BENCHMARK(BM_CanonicalEncode);

void BM_Fingerprint(benchmark::State& state) {
  const Certificate cert = bench_chain().front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(fingerprint(cert));
  }
}
BENCHMARK(BM_Fingerprint);

void BM_ValidateChain(benchmark::State& state) {
  const CertificateChain chain = bench_chain();
  for (auto _ : state) {
    benchmark::DoNotOptimize(validate_chain(chain, 1760000000));
  }
}
BENCHMARK(BM_ValidateChain);

void BM_ChainTextRoundTrip(benchmark::State& state) {
  const CertificateChain chain = bench_chain();
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain_from_text(chain_to_text(chain)));
  }
}
BENCHMARK(BM_ChainTextRoundTrip);

void BM_ScenarioRun(benchmark::State& state) {
  const auto scenario =
      sim::load_scenario_file(std::filesystem::path(RCMS_SCENARIO_DIR) / "off-legit-baseline.json");
  std::random_device rd;
  const auto base = std::filesystem::temp_directory_path() /
                    ("rcms-bench-" + std::to_string(rd()));
  std::size_t i = 0;
  for (auto _ : state) {
    sim::RunOptions options;
    options.store_dir = base / std::to_string(i++);
    benchmark::DoNotOptimize(run_scenario(scenario, options));
  }
  std::filesystem::remove_all(base);
}
BENCHMARK(BM_ScenarioRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
