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

import { test } from "node:test";
import assert from "node:assert/strict";

import { canvasToWorld, GestureTracker, worldToCanvas } from "../src/gesture.js";

const vp = { canvasSize: 512, worldSize: 128 };

test("canvas and world coordinates agree", () => {
  assert.deepEqual(canvasToWorld(0, 0, vp), [0, 0]);
  assert.deepEqual(canvasToWorld(512, 256, vp), [128, 64]);
  assert.deepEqual(worldToCanvas([128, 64], vp), [512, 256]);
});

test("button-up ends the intervention", () => {
  const g = new GestureTracker(vp);
  g.down(10, 10);
  assert.deepEqual(g.up(), { type: "intervene", active: false });
  assert.equal(g.active, false);
  assert.equal(g.move(50, 50), null);
});

test("drag right gives positive x velocity", () => {
  const g = new GestureTracker(vp);
  assert.deepEqual(g.down(100, 100), { type: "intervene", active: true, u: [0, 0] });
  const m = g.move(120, 100);  // 5 world units right
  assert.ok(m !== null && m.type === "intervene" && m.active);
  if (m !== null && m.type === "intervene" && m.active) {
    assert.ok(m.u[0] > 0);
    assert.equal(m.u[1], 0);
  }
});

test("long drags are clamped to max speed", () => {
  const g = new GestureTracker(vp, { maxSpeed: 3.5, gain: 0.25 });
  g.down(0, 0);
  g.move(512, 0);
  assert.deepEqual(g.vector, [3.5, 0]);
  g.move(300, 400);
  assert.ok(Math.abs(Math.hypot(...g.vector) - 3.5) < 1e-12);
});
