/** Canvas curve editor: click empty space to add a control point, drag a
 * point to move it, drag it off the axes to remove it. The rendered curve
 * is always the server's own evaluation (fetched as a 100-vertex
 * polyline), so what you see is exactly what synthesis uses. */

import type { ApiClient, CurveDoc } from "./api.js";
import { addPoint, applyDrag } from "./settings.js";

const POINT_RADIUS = 6;
const MARGIN = 24;

export interface EditorGeometry {
  width: number;
  height: number;
  xRange: [number, number];
  yRange: [number, number];
}

/** Pure coordinate mapping, separated from the DOM for testing. */
export class CurveGeometry {
  constructor(public geometry: EditorGeometry) {}

  toPixel(x: number, y: number): [number, number] {
    const { width, height, xRange, yRange } = this.geometry;
    const px = MARGIN +
      ((x - xRange[0]) / (xRange[1] - xRange[0])) * (width - 2 * MARGIN);
    const py = height - MARGIN -
      ((y - yRange[0]) / (yRange[1] - yRange[0])) * (height - 2 * MARGIN);
    return [px, py];
  }

  fromPixel(px: number, py: number): [number, number] {
    const { width, height, xRange, yRange } = this.geometry;
    const x = xRange[0] +
      ((px - MARGIN) / (width - 2 * MARGIN)) * (xRange[1] - xRange[0]);
    const y = yRange[0] +
      ((height - MARGIN - py) / (height - 2 * MARGIN)) *
        (yRange[1] - yRange[0]);
    return [x, y];
  }

  pickPoint(curve: CurveDoc, px: number, py: number): number | null {
    for (let i = 0; i < curve.points.length; i++) {
      const [cx, cy] = this.toPixel(curve.points[i][0], curve.points[i][1]);
      if (Math.hypot(cx - px, cy - py) <= POINT_RADIUS + 3) return i;
    }
    return null;
  }
}

export class CurveEditor {
  private geometry: CurveGeometry;
  private dragIndex: number | null = null;
  private preview: { xs: number[]; ys: number[] } | null = null;
  onChange: (curve: CurveDoc) => void = () => {};

  constructor(
    private canvas: HTMLCanvasElement,
    private api: ApiClient,
    public curve: CurveDoc,
    geometry: EditorGeometry,
  ) {
    this.geometry = new CurveGeometry(geometry);
    canvas.addEventListener("pointerdown", (e) => this.pointerDown(e));
    canvas.addEventListener("pointermove", (e) => this.pointerMove(e));
    canvas.addEventListener("pointerup", (e) => this.pointerUp(e));
  }

  setRanges(xRange: [number, number], yRange: [number, number]): void {
    this.geometry.geometry.xRange = xRange;
    this.geometry.geometry.yRange = yRange;
  }

  setCurve(curve: CurveDoc): void {
    this.curve = curve;
    void this.refresh();
  }

  private canvasPos(e: PointerEvent): [number, number] {
    const rect = this.canvas.getBoundingClientRect();
    return [
      ((e.clientX - rect.left) / rect.width) * this.canvas.width,
      ((e.clientY - rect.top) / rect.height) * this.canvas.height,
    ];
  }

  private pointerDown(e: PointerEvent): void {
    const [px, py] = this.canvasPos(e);
    const hit = this.geometry.pickPoint(this.curve, px, py);
    if (hit !== null) {
      this.dragIndex = hit;
      this.canvas.setPointerCapture(e.pointerId);
    } else {
      const [x, y] = this.geometry.fromPixel(px, py);
      const { xRange, yRange } = this.geometry.geometry;
      if (x >= xRange[0] && x <= xRange[1] && y >= yRange[0] && y <= yRange[1]) {
        this.curve = addPoint(this.curve, x, y);
        this.onChange(this.curve);
        void this.refresh();
      }
    }
  }

  private pointerMove(e: PointerEvent): void {
    if (this.dragIndex === null) return;
    const [px, py] = this.canvasPos(e);
    const [x, y] = this.geometry.fromPixel(px, py);
    const points = this.curve.points.map((p) => [...p] as [number, number]);
    points[this.dragIndex] = [x, y];
    this.curve = { points, kind: this.curve.kind };
    this.draw(); // live feedback without re-sorting mid-drag
  }

  private pointerUp(e: PointerEvent): void {
    if (this.dragIndex === null) return;
    const [px, py] = this.canvasPos(e);
    const [x, y] = this.geometry.fromPixel(px, py);
    const { xRange, yRange } = this.geometry.geometry;
    this.curve = applyDrag(this.curve, this.dragIndex, x, y, xRange, yRange);
    this.dragIndex = null;
    this.onChange(this.curve);
    void this.refresh();
  }

  /** Fetch the server-rendered polyline and redraw. */
  async refresh(): Promise<{ xs: number[]; ys: number[] }> {
    const [lo, hi] = this.geometry.geometry.xRange;
    this.preview = await this.api.curvePreview(this.curve, lo, hi, 100);
    this.draw();
    return this.preview;
  }

  draw(): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.geometry.geometry;
    ctx.clearRect(0, 0, width, height);
    ctx.strokeStyle = "#39424e";
    ctx.strokeRect(MARGIN, MARGIN, width - 2 * MARGIN, height - 2 * MARGIN);

    if (this.preview) {
      ctx.beginPath();
      ctx.strokeStyle = "#64b5f6";
      ctx.lineWidth = 2;
      this.preview.xs.forEach((x, i) => {
        const [px, py] = this.geometry.toPixel(x, this.preview!.ys[i]);
        if (i === 0) ctx.moveTo(px, py);
        else ctx.lineTo(px, py);
      });
      ctx.stroke();
    }

    ctx.fillStyle = "#ffb74d";
    for (const [x, y] of this.curve.points) {
      const [px, py] = this.geometry.toPixel(x, y);
      ctx.beginPath();
      ctx.arc(px, py, POINT_RADIUS, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}
