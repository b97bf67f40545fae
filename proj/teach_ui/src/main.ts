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

// Browser entry point: socket, pointer input and the animation loop.

import { GestureTracker, Viewport } from "./gesture.js";
import { ClientMessage, encode, parseServerMessage, PROTOCOL_VERSION } from "./protocol.js";
import { Ctx2D, render } from "./render.js";
import { initialView, reduce, ViewEvent } from "./view.js";

const canvas = document.getElementById("world") as HTMLCanvasElement;
// The DOM context widens fillStyle to gradients; we only ever assign strings.
const ctx = canvas.getContext("2d") as unknown as Ctx2D;
const vp: Viewport = { canvasSize: canvas.width, worldSize: 128 };
const gesture = new GestureTracker(vp);
let vm = initialView();

const ws = new WebSocket(`ws://${location.host}/ws`);
const dispatch = (e: ViewEvent) => {
  vm = reduce(vm, e);
};
const send = (m: ClientMessage | null) => {
  if (m !== null && ws.readyState === WebSocket.OPEN) ws.send(encode(m));
  dispatch({ kind: "gesture", active: gesture.active, vector: gesture.vector });
};

ws.onopen = () => {
  dispatch({ kind: "connection", status: "open" });
  ws.send(encode({ type: "hello", protocol_version: PROTOCOL_VERSION }));
};
ws.onclose = () => dispatch({ kind: "connection", status: "closed" });
ws.onmessage = (ev: MessageEvent<string>) => {
  try {
    dispatch({ kind: "message", message: parseServerMessage(ev.data) });
  } catch (err) {
    console.error(err);
  }
};

const local = (ev: PointerEvent): [number, number] => {
  const r = canvas.getBoundingClientRect();
  return [
    ((ev.clientX - r.left) * canvas.width) / r.width,
    ((ev.clientY - r.top) * canvas.height) / r.height,
  ];
};
canvas.addEventListener("pointerdown", (ev) => {
  canvas.setPointerCapture(ev.pointerId);
  send(gesture.down(...local(ev)));
});
canvas.addEventListener("pointermove", (ev) => send(gesture.move(...local(ev))));
canvas.addEventListener("pointerup", () => send(gesture.up()));
canvas.addEventListener("pointercancel", () => send(gesture.up()));

document.getElementById("reset")?.addEventListener("click", () => send({ type: "reset" }));

const frame = () => {
  render(ctx, vm, vp);
  requestAnimationFrame(frame);
};
requestAnimationFrame(frame);
