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

// Pointer gesture to intervention messages. Press starts an intervention,
// dragging sets the commanded velocity and release ends it.

import { clampNorm, ClientMessage, Vec2 } from "./protocol.js";

export interface Viewport {
  canvasSize: number;  // square canvas, pixels
  worldSize: number;
}

// World y grows downward like canvas y, so the start (0, 0) is top-left.
export function canvasToWorld(px: number, py: number, vp: Viewport): Vec2 {
  const k = vp.worldSize / vp.canvasSize;
  return [px * k, py * k];
}

export function worldToCanvas(w: Vec2, vp: Viewport): Vec2 {
  const k = vp.canvasSize / vp.worldSize;
  return [w[0] * k, w[1] * k];
}

export interface GestureOptions {
  maxSpeed: number;
  // Velocity per world unit of drag.
  gain: number;
}

export const DEFAULT_GESTURE: GestureOptions = { maxSpeed: 3.5, gain: 0.25 };

export class GestureTracker {
  private origin: Vec2 | null = null;
  private u: Vec2 = [0, 0];

  constructor(
    private readonly vp: Viewport,
    private readonly options: GestureOptions = DEFAULT_GESTURE,
  ) {}

  get active(): boolean {
    return this.origin !== null;
  }

  // Clamped command, as it will be sent.
  get vector(): Vec2 {
    return this.u;
  }

  down(px: number, py: number): ClientMessage {
    this.origin = canvasToWorld(px, py, this.vp);
    this.u = [0, 0];
    return { type: "intervene", active: true, u: this.u };
  }

  move(px: number, py: number): ClientMessage | null {
    if (this.origin === null) return null;
    const w = canvasToWorld(px, py, this.vp);
    const drag: Vec2 = [
      (w[0] - this.origin[0]) * this.options.gain,
      (w[1] - this.origin[1]) * this.options.gain,
    ];
    this.u = clampNorm(drag, this.options.maxSpeed);
    return { type: "intervene", active: true, u: this.u };
  }

  up(): ClientMessage {
    this.origin = null;
    this.u = [0, 0];
    return { type: "intervene", active: false };
  }
}
