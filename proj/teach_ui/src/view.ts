// Copyright 2026 The assistmpl Authors
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

// View state. Only the latest state message is kept.

import { ServerMessage, StateMessage, Vec2 } from "./protocol.js";

export type Connection = "connecting" | "open" | "closed";

export interface ViewModel {
  last: StateMessage | null;
  connection: Connection;
  gesture: { active: boolean; vector: Vec2 };
  tally: { successes: number; failures: number };
  error: string | null;
}

export type ViewEvent =
  | { kind: "message"; message: ServerMessage }
  | { kind: "connection"; status: Connection }
  | { kind: "gesture"; active: boolean; vector: Vec2 };

export function initialView(): ViewModel {
  return {
    last: null,
    connection: "connecting",
    gesture: { active: false, vector: [0, 0] },
    tally: { successes: 0, failures: 0 },
    error: null,
  };
}

export function reduce(vm: ViewModel, event: ViewEvent): ViewModel {
  switch (event.kind) {
    case "connection":
      return { ...vm, connection: event.status };
    case "gesture":
      return { ...vm, gesture: { active: event.active, vector: event.vector } };
    case "message": {
      const m = event.message;
      if (m.type === "state") return { ...vm, last: m, error: null };
      if (m.type === "episode_end") {
        const tally = { ...vm.tally };
        if (m.success) tally.successes += 1;
        else tally.failures += 1;
        return { ...vm, tally };
      }
      if (m.type === "error") return { ...vm, error: m.message };
      return vm;
    }
  }
}
