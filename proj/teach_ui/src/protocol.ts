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

// Wire protocol shared with the teaching server. Coordinates are world
// units; velocities are world units per step.

export const PROTOCOL_VERSION = 1;

export type Vec2 = [number, number];

export type EpisodeStatus = "running" | "reached_goal" | "collided" | "done";

export interface StateMessage {
  type: "state";
  t: number;
  agent: Vec2;
  obstacle: Vec2;
  goal: Vec2;
  p: 0 | 1;
  status: EpisodeStatus;
}

export interface EpisodeEndMessage {
  type: "episode_end";
  success: boolean;
  steps: number;
}

export interface HelloReply {
  type: "hello";
  protocol_version: number;
  session_id: string;
}

export interface ErrorMessage {
  type: "error";
  message: string;
}

export type ServerMessage =
  | StateMessage
  | EpisodeEndMessage
  | HelloReply
  | ErrorMessage;

export type ClientMessage =
  | { type: "hello"; protocol_version: number }
  | { type: "intervene"; active: true; u: Vec2 }
  | { type: "intervene"; active: false }
  | { type: "reset" };

export class ProtocolError extends Error {}

const STATUSES: readonly string[] = ["running", "reached_goal", "collided", "done"];

function isVec2(v: unknown): v is Vec2 {
  return (
    Array.isArray(v) &&
    v.length === 2 &&
    v.every((x) => typeof x === "number" && Number.isFinite(x))
  );
}

function isObject(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

export function parseServerMessage(text: string): ServerMessage {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch {
    throw new ProtocolError("server sent invalid JSON");
  }
  if (!isObject(raw)) throw new ProtocolError("server message is not an object");
  switch (raw.type) {
    case "state":
      if (
        typeof raw.t !== "number" ||
        !isVec2(raw.agent) ||
        !isVec2(raw.obstacle) ||
        !isVec2(raw.goal) ||
        (raw.p !== 0 && raw.p !== 1) ||
        typeof raw.status !== "string" ||
        !STATUSES.includes(raw.status)
      ) {
        throw new ProtocolError("malformed state message");
      }
      return raw as unknown as StateMessage;
    case "episode_end":
      if (typeof raw.success !== "boolean" || typeof raw.steps !== "number") {
        throw new ProtocolError("malformed episode_end message");
      }
      return raw as unknown as EpisodeEndMessage;
    case "hello":
      if (raw.protocol_version !== PROTOCOL_VERSION) {
        throw new ProtocolError(`unsupported protocol ${String(raw.protocol_version)}`);
      }
      return raw as unknown as HelloReply;
    case "error":
      return { type: "error", message: String(raw.message ?? "") };
    default:
      throw new ProtocolError(`unknown message type ${String(raw.type)}`);
  }
}

// True when `msg` matches the client schema exactly (no extra keys).
export function isValidClientMessage(msg: unknown): msg is ClientMessage {
  if (!isObject(msg)) return false;
  const keys = Object.keys(msg).sort().join(",");
  switch (msg.type) {
    case "hello":
      return keys === "protocol_version,type" && msg.protocol_version === PROTOCOL_VERSION;
    case "reset":
      return keys === "type";
    case "intervene":
      if (msg.active === false) return keys === "active,type";
      return msg.active === true && keys === "active,type,u" && isVec2(msg.u);
    default:
      return false;
  }
}

export function encode(msg: ClientMessage): string {
  if (!isValidClientMessage(msg)) throw new ProtocolError("invalid client message");
  return JSON.stringify(msg);
}

export function clampNorm(v: Vec2, max: number): Vec2 {
  const n = Math.hypot(v[0], v[1]);
  if (n <= max || n === 0) return [v[0], v[1]];
  return [(v[0] * max) / n, (v[1] * max) / n];
}
