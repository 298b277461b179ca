// Copyright 2026 The hamgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hamgate/gate_library.hpp"
#include "hamgate/matrix_io.hpp"
#include "oracles.hpp"

namespace hamgate {
namespace {

ComplexMatrix gate(GateKind kind, std::vector<double> params = {}, int controls = 0) {
  return standard_gate(make_gate(kind, std::move(params), controls));
}

ComplexMatrix toffoli_matrix() {
  ComplexMatrix t = identity(8);
  t(6, 6) = t(7, 7) = 0.0;
  t(6, 7) = t(7, 6) = 1.0;
  return t;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::NumericalFailure;
}

TEST(StandardGate, PauliX) {
  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  EXPECT_EQ(gate(GateKind::X), x);
}

TEST(StandardGate, Hadamard) {
  const ComplexMatrix h = (oracle::pauli('X') + oracle::pauli('Z')) / std::sqrt(2.0);
  EXPECT_LE(max_abs_diff(gate(GateKind::H), h), 1e-15);
}

TEST(StandardGate, RzPi) {
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = std::polar(1.0, -kPi / 2);
  expected(1, 1) = std::polar(1.0, kPi / 2);
  EXPECT_LE(max_abs_diff(gate(GateKind::RZ, {kPi}), expected), 1e-15);
}

TEST(StandardGate, RotationsMatchExponentialOracle) {
  for (double theta : {0.3, 1.0, -2.2}) {
    for (auto [kind, axis] : {std::pair{GateKind::RX, 'X'}, std::pair{GateKind::RY, 'Y'},
                              std::pair{GateKind::RZ, 'Z'}}) {
      const auto expected = oracle::exp_i(-0.5 * theta * oracle::pauli(axis));
      EXPECT_LE(max_abs_diff(gate(kind, {theta}), expected), 1e-14);
    }
  }
}

TEST(StandardGate, EveryConstructedGateIsUnitary) {
  const GateKind fixed[] = {GateKind::I, GateKind::X, GateKind::Y, GateKind::Z,
                            GateKind::H, GateKind::S, GateKind::T, GateKind::CX,
                            GateKind::CZ, GateKind::SWAP};
  for (auto k : fixed) EXPECT_TRUE(is_unitary(gate(k), 1e-12)) << gate_name(k);
  for (auto k : {GateKind::RX, GateKind::RY, GateKind::RZ}) {
    EXPECT_TRUE(is_unitary(gate(k, {0.7}), 1e-12));
  }
  for (int n = 0; n <= 6; ++n) {
    EXPECT_TRUE(is_unitary(gate(GateKind::CNX, {}, n), 1e-12));
    EXPECT_TRUE(is_unitary(gate(GateKind::CNH, {}, n), 1e-12));
    EXPECT_TRUE(is_unitary(gate(GateKind::CNTOFF, {}, n), 1e-12));
  }
}

TEST(StandardGate, ParamCountIsChecked) {
  auto spec = make_gate(GateKind::RZ);
  EXPECT_EQ(kind_of([&] { standard_gate(spec); }), ErrorKind::BadParamCount);
  spec = make_gate(GateKind::X, {1.0});
  EXPECT_EQ(kind_of([&] { standard_gate(spec); }), ErrorKind::BadParamCount);
}

TEST(Controlled, ZeroControlsIsIdentityMap) {
  std::mt19937_64 rng(1);
  const auto u = oracle::random_unitary(4, rng);
  EXPECT_EQ(controlled(u, 0), u);
}

TEST(Controlled, OneControlIsCnot) {
  ComplexMatrix cnot = identity(4);
  cnot(2, 2) = cnot(3, 3) = 0.0;
  cnot(2, 3) = cnot(3, 2) = 1.0;
  EXPECT_EQ(controlled(pauli::X(), 1), cnot);
  EXPECT_EQ(gate(GateKind::CX), cnot);
}

TEST(Controlled, TwoControlsIsToffoli) {
  EXPECT_EQ(controlled(pauli::X(), 2), toffoli_matrix());
}

TEST(Controlled, ControlledToffoliIsMultiControlledX) {
  for (int n = 0; n <= 4; ++n) {
    EXPECT_EQ(controlled(toffoli_matrix(), n), controlled(pauli::X(), n + 2));
    EXPECT_EQ(gate(GateKind::CNTOFF, {}, n), controlled(pauli::X(), n + 2));
  }
}

TEST(Controlled, RejectsNonUnitaryBase) {
  EXPECT_EQ(kind_of([] { controlled(2.0 * identity(2), 1); }), ErrorKind::NotUnitary);
}

TEST(ParseCircuit, SingleX) {
  const auto c = parse_circuit("qubits 1\nX 0");
  ASSERT_EQ(c.n_qubits, 1);
  ASSERT_EQ(c.gates.size(), 1u);
  EXPECT_EQ(c.gates[0].kind, GateKind::X);
  EXPECT_EQ(c.gates[0].qubits, std::vector<int>{0});
}

TEST(ParseCircuit, MultiControlledX) {
  const auto c = parse_circuit("qubits 3\nCNX 0 1 2");
  ASSERT_EQ(c.gates.size(), 1u);
  EXPECT_EQ(c.gates[0].kind, GateKind::CNX);
  EXPECT_EQ(c.gates[0].qubits, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(standard_gate(c.gates[0]), toffoli_matrix());
}

TEST(ParseCircuit, DecimalAngle) {
  const auto c = parse_circuit("qubits 1\nRZ(1.5707963268) 0");
  ASSERT_EQ(c.gates[0].params.size(), 1u);
  EXPECT_NEAR(c.gates[0].params[0], kPi / 2, 1e-10);
}

TEST(ParseCircuit, PiExpressionsCommentsAndBlankLines) {
  const auto c = parse_circuit(
      "# leading comment\n\nqubits 2   # header\n"
      "rx(pi/2) 1\n"
      "RZ(-3*pi/4) 0\n"
      "RY(2*(pi - 1)) 0\n"
      "   \n"
      "CX 1 0  # reversed control\n");
  ASSERT_EQ(c.gates.size(), 4u);
  EXPECT_DOUBLE_EQ(c.gates[0].params[0], kPi / 2);
  EXPECT_DOUBLE_EQ(c.gates[1].params[0], -3 * kPi / 4);
  EXPECT_DOUBLE_EQ(c.gates[2].params[0], 2 * (kPi - 1));
  EXPECT_EQ(c.gates[3].qubits, (std::vector<int>{1, 0}));
}

TEST(ParseCircuit, ErrorsCarryKindAndLine) {
  struct Case {
    const char* text;
    ErrorKind kind;
    int line;
  };
  const Case cases[] = {
      {"X 0", ErrorKind::SyntaxError, 1},
      {"qubits 2\nX 0\nFOO 1", ErrorKind::UnknownGate, 3},
      {"qubits 2\nX 2", ErrorKind::IndexOutOfRange, 2},
      {"qubits 2\n\nCX 1 1", ErrorKind::DuplicateQubit, 3},
      {"qubits 1\nRZ 0", ErrorKind::BadParamCount, 2},
      {"qubits 1\nRZ(pi/) 0", ErrorKind::SyntaxError, 2},
      {"qubits 1\nX zero", ErrorKind::SyntaxError, 2},
      {"qubits 0", ErrorKind::SyntaxError, 1},
      {"# nothing\n", ErrorKind::SyntaxError, 2},
  };
  for (const auto& c : cases) {
    try {
      parse_circuit(c.text);
      ADD_FAILURE() << "no error for: " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.kind(), c.kind) << c.text;
      EXPECT_EQ(e.line(), c.line) << c.text;
    }
  }
}

TEST(ParseCircuit, RoundTripIsIdentity) {
  const auto dir = std::filesystem::temp_directory_path() / "hamgate_gate_library_test";
  std::filesystem::create_directories(dir);
  ComplexMatrix custom(4, 4);
  custom = gate(GateKind::SWAP) * std::polar(1.0, 0.3);
  save_matrix_json(dir / "swapish.json", custom);

  const std::string text =
      "qubits 4\n"
      "H 0\nCX 0 1\nRX(0.1) 2\nRY(-pi/3) 3\nRZ(1e-7) 1\nS 2\nT 3\nY 0\nZ 1\n"
      "CZ 2 3\nSWAP 0 3\nCNX 0 1 2 3\nCNH 3 2\nCNTOFF 0 1 2 3\nI 2\n"
      "CUSTOM swapish.json 1 2\n";
  const auto c1 = parse_circuit(text, dir);
  const auto c2 = parse_circuit(serialize_circuit(c1), dir);
  EXPECT_EQ(c1, c2);
  EXPECT_EQ(serialize_circuit(c1), serialize_circuit(c2));
  std::filesystem::remove_all(dir);
}

TEST(ParseCircuit, CustomMatrixMustBeUnitary) {
  const auto dir = std::filesystem::temp_directory_path() / "hamgate_gate_library_bad";
  std::filesystem::create_directories(dir);
  save_matrix_json(dir / "bad.json", 2.0 * identity(2));
  try {
    parse_circuit("qubits 1\nCUSTOM bad.json 0\n", dir);
    ADD_FAILURE() << "expected failure";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotUnitary);
    EXPECT_EQ(e.line(), 2);
  }
  std::filesystem::remove_all(dir);
}

TEST(CircuitUnitary, XTwiceIsIdentity) {
  EXPECT_LE(max_abs_diff(circuit_unitary(parse_circuit("qubits 1\nX 0\nX 0")), identity(2)), 0.0);
}

TEST(CircuitUnitary, HadamardThenCnotMakesBellState) {
  const auto u = circuit_unitary(parse_circuit("qubits 2\nH 0\nCX 0 1"));
  StateVector zero = StateVector::Zero(4);
  zero(0) = 1.0;
  // Direct product of the gate matrices, first gate rightmost.
  const ComplexMatrix direct = gate(GateKind::CX) * oracle::kron(gate(GateKind::H), pauli::I());
  EXPECT_LE(max_abs_diff(u, direct), 1e-15);
  StateVector bell = StateVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  EXPECT_LE((u * zero - bell).norm(), 1e-15);
}

TEST(CircuitUnitary, ReversedControlAndEmbedding) {
  // CX with control 1 and target 0 flips qubit 0 (MSB) when qubit 1 is set.
  const auto u = circuit_unitary(parse_circuit("qubits 2\nCX 1 0"));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = expected(2, 2) = 1.0;
  expected(1, 3) = expected(3, 1) = 1.0;
  EXPECT_EQ(u, expected);
  const auto v = circuit_unitary(parse_circuit("qubits 3\nRX(0.4) 1"));
  EXPECT_LE(max_abs_diff(v, oracle::kron(oracle::kron(pauli::I(), gate(GateKind::RX, {0.4})),
                                         pauli::I())),
            1e-15);
}

TEST(CircuitUnitary, RejectsMoreThanTenQubits) {
  Circuit c;
  c.n_qubits = 11;
  EXPECT_EQ(kind_of([&] { circuit_unitary(c); }), ErrorKind::TooLarge);
}

TEST(GateLabel, Formats) {
  EXPECT_EQ(gate_label(make_gate(GateKind::CNX, {}, 2)), "CNX[2]");
  EXPECT_EQ(gate_label(make_gate(GateKind::X)), "X");
}

TEST(MatrixIo, RoundTripAndValidation) {
  std::mt19937_64 rng(9);
  const auto u = oracle::random_unitary(4, rng);
  EXPECT_EQ(matrix_from_json(matrix_to_json(u)), u);
  EXPECT_EQ(kind_of([] { matrix_from_json(nlohmann::json::parse("[[[1,0],[0,0]]]")); }),
            ErrorKind::DimMismatch);
  EXPECT_EQ(kind_of([] {
              matrix_from_json(nlohmann::json::parse(
                  "[[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]"));
            }),
            ErrorKind::DimMismatch);
  EXPECT_EQ(kind_of([] { matrix_from_json(nlohmann::json::parse("[[1,0],[0,1]]")); }),
            ErrorKind::InvalidArgument);
}

}  // namespace
}  // namespace hamgate
