import * as THREE from "three";
import { OrbitControls } from "three/addons/controls/OrbitControls.js";

import type { HeatmapCell } from "./heatmap";
import type { DiagramDoc, SceneDoc, SunResponse } from "./types";

const MATERIAL_BASE: Record<string, { color: number; opacity: number }> = {
  plastic: { color: 0x9a9a9a, opacity: 1.0 },
  glass: { color: 0x9fc6e0, opacity: 0.35 },
  trans: { color: 0xd8d2c0, opacity: 0.6 },
};

/**
 * 3D view: building meshes, the heatmap plane, the sun-path diagram and a
 * directional sun. Strictly presentational; all data arrives from the API and
 * the transparent-model toggle touches material opacity only.
 */
export class SceneViewer {
  private renderer: THREE.WebGLRenderer;
  private scene = new THREE.Scene();
  private camera: THREE.PerspectiveCamera;
  private controls: OrbitControls;
  private buildingGroup = new THREE.Group();
  private heatmapGroup = new THREE.Group();
  private diagramGroup = new THREE.Group();
  private sunLight = new THREE.DirectionalLight(0xfff4e0, 1.2);
  private meshMaterials: { kind: string; material: THREE.MeshStandardMaterial }[] = [];
  private transparent = false;

  constructor(private readonly canvas: HTMLCanvasElement) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.renderer.setClearColor(0x10141a);
    this.camera = new THREE.PerspectiveCamera(55, 1, 0.1, 2000);
    this.camera.up.set(0, 0, 1); // Z-up to match the scene convention
    this.camera.position.set(12, -14, 9);
    this.controls = new OrbitControls(this.camera, canvas);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.45));
    this.scene.add(new THREE.HemisphereLight(0xbfd8ff, 0x303030, 0.5));
    this.scene.add(this.sunLight);
    this.scene.add(this.sunLight.target);
    this.scene.add(this.buildingGroup);
    this.scene.add(this.heatmapGroup);
    this.scene.add(this.diagramGroup);
    this.animate();
  }

  resize(width: number, height: number): void {
    this.renderer.setSize(width, height, false);
    this.camera.aspect = width / height;
    this.camera.updateProjectionMatrix();
  }

  private animate = (): void => {
    requestAnimationFrame(this.animate);
    this.controls.update();
    this.renderer.render(this.scene, this.camera);
  };

  private clearGroup(group: THREE.Group): void {
    for (const child of [...group.children]) {
      group.remove(child);
      if (child instanceof THREE.Mesh || child instanceof THREE.Line) {
        child.geometry.dispose();
        const material = child.material as THREE.Material;
        material.dispose();
      }
    }
  }

  loadScene(doc: SceneDoc): void {
    this.clearGroup(this.buildingGroup);
    this.meshMaterials = [];
    const kinds = new Map(doc.materials.map((m) => [m.name, m.kind]));
    for (const mesh of doc.meshes) {
      const kind = kinds.get(mesh.material) ?? "plastic";
      const base = MATERIAL_BASE[kind] ?? MATERIAL_BASE["plastic"]!;
      const geometry = new THREE.BufferGeometry();
      geometry.setAttribute(
        "position",
        new THREE.Float32BufferAttribute(mesh.vertices.flat(), 3),
      );
      geometry.setIndex(mesh.triangles.flat());
      geometry.computeVertexNormals();
      const material = new THREE.MeshStandardMaterial({
        color: base.color,
        opacity: base.opacity,
        transparent: base.opacity < 1,
        side: THREE.DoubleSide,
        roughness: 0.85,
      });
      this.meshMaterials.push({ kind, material });
      this.buildingGroup.add(new THREE.Mesh(geometry, material));
    }
    this.applyTransparency();
    this.frameCameraOn(doc);
  }

  private frameCameraOn(doc: SceneDoc): void {
    const box = new THREE.Box3();
    for (const mesh of doc.meshes) {
      for (const v of mesh.vertices) {
        box.expandByPoint(new THREE.Vector3(v[0], v[1], v[2]));
      }
    }
    if (box.isEmpty()) return;
    const center = box.getCenter(new THREE.Vector3());
    const size = box.getSize(new THREE.Vector3()).length();
    this.controls.target.copy(center);
    this.camera.position.copy(center).add(new THREE.Vector3(size, -size, size * 0.7));
  }

  /** Direct light follows the server-provided sun direction. */
  setSun(sun: SunResponse): void {
    const [x, y, z] = sun.direction;
    this.sunLight.position.set(x * 100, y * 100, z * 100);
    this.sunLight.target.position.set(0, 0, 0);
    this.sunLight.intensity = sun.above_horizon ? 1.2 : 0.0;
  }

  setHeatmap(cells: HeatmapCell[]): void {
    this.clearGroup(this.heatmapGroup);
    for (const cell of cells) {
      const geometry = new THREE.PlaneGeometry(cell.width, cell.depth);
      const material = new THREE.MeshBasicMaterial({
        color: new THREE.Color(cell.color[0] / 255, cell.color[1] / 255, cell.color[2] / 255),
        side: THREE.DoubleSide,
      });
      const tile = new THREE.Mesh(geometry, material);
      tile.position.set(cell.x, cell.y, cell.z + 0.01);
      this.heatmapGroup.add(tile);
    }
  }

  setDiagram(diagram: DiagramDoc): void {
    this.clearGroup(this.diagramGroup);
    for (const arc of diagram.arcs) {
      const up = arc.samples.filter((s) => s.altitude >= 0);
      if (up.length < 2) continue;
      const geometry = new THREE.BufferGeometry().setFromPoints(
        up.map((s) => new THREE.Vector3(...s.point)),
      );
      const material = new THREE.LineBasicMaterial({
        color: new THREE.Color(arc.color[0] / 255, arc.color[1] / 255, arc.color[2] / 255),
      });
      this.diagramGroup.add(new THREE.Line(geometry, material));
    }
    for (const analemma of diagram.analemmas) {
      const up = analemma.samples.filter((s) => s.altitude >= 0);
      if (up.length < 2) continue;
      const geometry = new THREE.BufferGeometry().setFromPoints(
        up.map((s) => new THREE.Vector3(...s.point)),
      );
      this.diagramGroup.add(
        new THREE.Line(geometry, new THREE.LineBasicMaterial({ color: 0x888888 })),
      );
    }
  }

  /** View-only: fade opaque materials so the sun stays visible through walls. */
  setTransparent(enabled: boolean): void {
    this.transparent = enabled;
    this.applyTransparency();
  }

  private applyTransparency(): void {
    for (const { kind, material } of this.meshMaterials) {
      const base = MATERIAL_BASE[kind] ?? MATERIAL_BASE["plastic"]!;
      material.opacity = this.transparent ? Math.min(base.opacity, 0.25) : base.opacity;
      material.transparent = this.transparent || base.opacity < 1;
      material.needsUpdate = true;
    }
  }
}
