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

// Canvas drawing. Takes a minimal context interface so it can run
// against a recording fake outside the browser.

import { Vec2 } from "./protocol.js";
import { ViewModel } from "./view.js";
import { Viewport, worldToCanvas } from "./gesture.js";

export interface Ctx2D {
  fillStyle: string;
  strokeStyle: string;
  lineWidth: number;
  font: string;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  fill(): void;
  stroke(): void;
  fillText(text: string, x: number, y: number): void;
}

export const COLORS = {
  background: "#ffffff",
  agent: "#d62728",
  obstacle: "#2ca02c",
  goal: "#1f77b4",
  intervention: "#ff9900",
  overlay: "rgba(0,0,0,0.55)",
};

export const AGENT_RADIUS = 4;
export const OBSTACLE_RADIUS = 4;

function disc(ctx: Ctx2D, at: Vec2, r: number, color: string): void {
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.arc(at[0], at[1], r, 0, 2 * Math.PI);
  ctx.fill();
}

export function render(ctx: Ctx2D, vm: ViewModel, vp: Viewport): void {
  const k = vp.canvasSize / vp.worldSize;
  ctx.fillStyle = COLORS.background;
  ctx.fillRect(0, 0, vp.canvasSize, vp.canvasSize);
  ctx.strokeStyle = "#000000";
  ctx.lineWidth = 1;
  ctx.strokeRect(0, 0, vp.canvasSize, vp.canvasSize);

  const s = vm.last;
  if (s !== null) {
    const goal = worldToCanvas(s.goal, vp);
    ctx.strokeStyle = COLORS.goal;
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.arc(goal[0], goal[1], 6 * k, 0, 2 * Math.PI);
    ctx.stroke();

    const agent = worldToCanvas(s.agent, vp);
    if (s.p === 1) disc(ctx, agent, (AGENT_RADIUS + 3) * k, COLORS.intervention);
    disc(ctx, agent, AGENT_RADIUS * k, COLORS.agent);
    disc(ctx, worldToCanvas(s.obstacle, vp), OBSTACLE_RADIUS * k, COLORS.obstacle);

    if (vm.gesture.active) {
      const v = vm.gesture.vector;
      ctx.strokeStyle = COLORS.intervention;
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(agent[0], agent[1]);
      ctx.lineTo(agent[0] + v[0] * 5 * k, agent[1] + v[1] * 5 * k);
      ctx.stroke();
    }

    ctx.fillStyle = "#000000";
    ctx.font = "12px sans-serif";
    const speed = Math.hypot(vm.gesture.vector[0], vm.gesture.vector[1]);
    ctx.fillText(
      `t=${s.t}  p=${s.p}  |u|=${speed.toFixed(2)}  ` +
        `ok ${vm.tally.successes} / failed ${vm.tally.failures}`,
      6,
      vp.canvasSize - 8,
    );
  }

  if (vm.connection !== "open") {
    ctx.fillStyle = COLORS.overlay;
    ctx.fillRect(0, 0, vp.canvasSize, vp.canvasSize);
    ctx.fillStyle = "#ffffff";
    ctx.font = "16px sans-serif";
    ctx.fillText(vm.connection === "closed" ? "disconnected" : "connecting", 12, 24);
  }
}
