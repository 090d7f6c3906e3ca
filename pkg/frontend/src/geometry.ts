// Client-side geometry is limited to canvas affordances (ghost dots along
// a stroke); all ranking and composition math stays on the server.

export type Pt = [number, number];

export function resamplePoints(points: Pt[], n: number): Pt[] {
  if (points.length === 0 || n < 1) return [];
  if (points.length === 1) return Array(n).fill(points[0]);
  const gaps: number[] = [];
  let total = 0;
  for (let i = 1; i < points.length; i++) {
    const d = Math.hypot(points[i][0] - points[i - 1][0], points[i][1] - points[i - 1][1]);
    gaps.push(d);
    total += d;
  }
  if (total === 0) return Array(n).fill(points[0]);
  const out: Pt[] = [points[0]];
  let seg = 0;
  let acc = 0;
  for (let i = 1; i < n - 1; i++) {
    const target = (total * i) / (n - 1);
    while (acc + gaps[seg] < target) {
      acc += gaps[seg];
      seg += 1;
    }
    const t = gaps[seg] === 0 ? 0 : (target - acc) / gaps[seg];
    const [ax, ay] = points[seg];
    const [bx, by] = points[seg + 1];
    out.push([ax + (bx - ax) * t, ay + (by - ay) * t]);
  }
  out.push(points[points.length - 1]);
  return out;
}
