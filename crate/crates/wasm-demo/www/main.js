import init, { domain, landscape, levy_walk, firefly_swarm } from "./pkg/eagle_wasm_demo.js";

const RES = 130;
const canvas = document.getElementById("plot");
const ctx = canvas.getContext("2d");
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
let background = null;
let timer = null;

function status(text) {
  $("status").textContent = text;
}

function bounds() {
  const [lo, hi] = domain($("function").value);
  return { lo, hi };
}

function toCanvas(x, y, { lo, hi }) {
  const s = canvas.width / (hi - lo);
  return [(x - lo) * s, canvas.height - (y - lo) * s];
}

function drawLandscape() {
  const values = landscape($("function").value, num("sigma"), RES, num("seed"));
  let min = Infinity, max = -Infinity;
  for (const v of values) { min = Math.min(min, v); max = Math.max(max, v); }
  const img = ctx.createImageData(RES, RES);
  for (let row = 0; row < RES; row++) {
    for (let col = 0; col < RES; col++) {
      // rows grow upward in the domain, downward on the canvas
      const t = (values[row * RES + col] - min) / (max - min || 1);
      const i = ((RES - 1 - row) * RES + col) * 4;
      img.data[i] = 255 * Math.sqrt(t);
      img.data[i + 1] = 200 * t;
      img.data[i + 2] = 255 * (1 - t);
      img.data[i + 3] = 255;
    }
  }
  const off = new OffscreenCanvas(RES, RES);
  off.getContext("2d").putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, canvas.width, canvas.height);
  background = ctx.getImageData(0, 0, canvas.width, canvas.height);
  status(`range [${min.toFixed(3)}, ${max.toFixed(3)}]`);
}

function restore() {
  if (timer) { clearInterval(timer); timer = null; }
  if (!background) drawLandscape();
  ctx.putImageData(background, 0, 0);
}

function walk() {
  restore();
  const b = bounds();
  const xy = levy_walk($("function").value, num("lambda"), num("steps"), num("seed"));
  ctx.strokeStyle = "white";
  ctx.lineWidth = 1.2;
  ctx.beginPath();
  for (let k = 0; k < xy.length; k += 2) {
    const [px, py] = toCanvas(xy[k], xy[k + 1], b);
    k === 0 ? ctx.moveTo(px, py) : ctx.lineTo(px, py);
  }
  ctx.stroke();
  let longest = 0;
  for (let k = 2; k < xy.length; k += 2) {
    longest = Math.max(longest, Math.hypot(xy[k] - xy[k - 2], xy[k + 1] - xy[k - 1]));
  }
  status(`${xy.length / 2 - 1} jumps, longest ${longest.toFixed(3)}`);
}

function swarm() {
  restore();
  const b = bounds();
  const out = firefly_swarm($("function").value, num("sigma"), num("generations"), num("alpha"), num("gamma"), num("seed"));
  const [n, bx, by, bestValue, evals] = out;
  const frames = (out.length - 5) / (2 * n);
  let frame = 0;
  timer = setInterval(() => {
    ctx.putImageData(background, 0, 0);
    const base = 5 + frame * 2 * n;
    for (let k = 0; k < n; k++) {
      const [px, py] = toCanvas(out[base + 2 * k], out[base + 2 * k + 1], b);
      ctx.fillStyle = k === 0 ? "yellow" : "white";
      ctx.beginPath();
      ctx.arc(px, py, k === 0 ? 5 : 3, 0, 2 * Math.PI);
      ctx.fill();
    }
    status(`generation ${frame}/${frames - 1}\nbest (${bx.toFixed(4)}, ${by.toFixed(4)}) f = ${bestValue.toExponential(3)}\n${evals} evaluations`);
    frame += 1;
    if (frame === frames) { clearInterval(timer); timer = null; }
  }, 250);
}

function guarded(fn) {
  return () => {
    try { fn(); } catch (e) { status(String(e)); }
  };
}

await init();
$("draw").onclick = guarded(drawLandscape);
$("walk").onclick = guarded(walk);
$("swarm").onclick = guarded(swarm);
$("function").onchange = guarded(drawLandscape);
guarded(drawLandscape)();
