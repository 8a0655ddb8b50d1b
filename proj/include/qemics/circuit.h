// Copyright 2026 The qem-ics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QEMICS_CIRCUIT_H
#define QEMICS_CIRCUIT_H

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qemics/clifford.h"
#include "qemics/pauli.h"
#include "qemics/rng.h"

namespace qem {

/// One position in a frame: a fixed two-qubit Clifford gate or a slot for a
/// variable single-qubit gate.
struct FrameElement {
    bool is_slot = false;
    CliffordGate gate;      ///< valid when !is_slot
    uint32_t qubit = 0;     ///< slot qubit, valid when is_slot
    uint32_t slot_index = 0;  ///< position in Circuit::slots, valid when is_slot

    static FrameElement slot(uint32_t q) { return FrameElement{true, {}, q, 0}; }
    static FrameElement two_qubit(const CliffordGate &g) { return FrameElement{false, g, 0, 0}; }
};

/// Fixed pattern of two-qubit Clifford gates and single-qubit slots, plus the
/// measured Pauli observable.
///
/// The first n elements are the post-initialisation slot layer (one slot per
/// qubit, in qubit order) and every qubit's last operation is a slot.
class CircuitFrame {
   public:
    /// Validates the element list and assigns slot indices. Throws std::invalid_argument.
    CircuitFrame(size_t num_qubits, std::vector<FrameElement> elements, PauliString observable);

    size_t num_qubits() const { return n_; }
    const std::vector<FrameElement> &elements() const { return elements_; }
    const PauliString &observable() const { return observable_; }
    size_t num_slots() const { return slot_qubits_.size(); }
    size_t num_two_qubit_gates() const { return two_qubit_count_; }
    uint32_t slot_qubit(size_t slot) const { return slot_qubits_[slot]; }

   private:
    size_t n_;
    std::vector<FrameElement> elements_;
    PauliString observable_;
    std::vector<uint32_t> slot_qubits_;
    size_t two_qubit_count_ = 0;
};

/// Gate bound to a slot: a C1 element, or a general single-qubit unitary (clifford == -1).
struct SlotGate {
    int clifford = 0;
    Mat2 unitary = Mat2::Identity();

    static SlotGate from_clifford(int index);
    static SlotGate from_unitary(const Mat2 &u);

    bool is_clifford() const { return clifford >= 0; }
    /// The 2x2 matrix of the gate, whichever way it was bound.
    Mat2 matrix() const;
};

/// A frame with every slot bound.
class Circuit {
   public:
    Circuit(std::shared_ptr<const CircuitFrame> frame, std::vector<SlotGate> slots);

    const CircuitFrame &frame() const { return *frame_; }
    const std::shared_ptr<const CircuitFrame> &frame_ptr() const { return frame_; }
    const std::vector<SlotGate> &slots() const { return slots_; }
    std::vector<SlotGate> &mutable_slots() { return slots_; }
    size_t num_qubits() const { return frame_->num_qubits(); }
    const PauliString &observable() const { return frame_->observable(); }
    /// Number of gates N: two-qubit frame gates plus slot gates.
    size_t num_gates() const { return frame_->elements().size(); }

    bool is_clifford() const;
    /// Clifford form of element `i`. Throws std::invalid_argument when a slot holds a non-Clifford unitary.
    CliffordGate clifford_gate(size_t element) const;

   private:
    std::shared_ptr<const CircuitFrame> frame_;
    std::vector<SlotGate> slots_;
};

enum class FrameKind { PeriodicCycling, LinearNetwork, AllToAll };

std::string to_string(FrameKind kind);
FrameKind frame_kind_from_string(const std::string &name);

/// Parameters of one of the three generated frame families.
struct FrameFamily {
    FrameKind kind = FrameKind::AllToAll;
    size_t num_qubits = 2;
    size_t two_qubit_count = 1;
    uint64_t seed = 0;
    GateKind gate = GateKind::CZ;
    /// PeriodicCycling only: keep the wrap-around gate between the last and first qubit.
    bool periodic_wrap = true;
};

std::shared_ptr<const CircuitFrame> build_frame(const FrameFamily &family);

/// Haar-random 2x2 unitary (QR of a complex Gaussian matrix with phase fixing).
Mat2 haar_unitary(Rng &rng);
/// exp(-i angle/2 n.sigma) for a unit vector n.
Mat2 rotation(double angle, double nx, double ny, double nz);

Circuit bind_random_unitary(const std::shared_ptr<const CircuitFrame> &frame, Rng &rng);
Circuit bind_cliffords(const std::shared_ptr<const CircuitFrame> &frame, const std::vector<int> &indices);

/// Error-sensitive Clifford circuit with every slot gate then rotated by a random
/// angle in [-rotation_scale, rotation_scale] about a uniformly random axis.
Circuit bind_near_one_fc(const std::shared_ptr<const CircuitFrame> &frame, double rotation_scale, Rng &rng);

}  // namespace qem

#endif
