export interface LatLng {
  lat: number;
  lng: number;
}

/**
 * Decode an encoded polyline string (1e-5 precision) into lat/lng pairs.
 *
 * The wire format packs signed coordinate deltas into printable ASCII,
 * five bits per character. Throws on truncated or corrupt input rather
 * than returning a partial path.
 */
export function decodePolyline(encoded: string): LatLng[] {
  const points: LatLng[] = [];
  let i = 0;
  let lat = 0;
  let lng = 0;

  const nextDelta = (): number => {
    let result = 0;
    let shift = 0;
    let byte: number;
    do {
      if (i >= encoded.length) {
        throw new Error(`polyline truncated at index ${i}`);
      }
      byte = encoded.charCodeAt(i++) - 63;
      if (byte < 0 || byte > 63) {
        throw new Error(`invalid polyline character at index ${i - 1}`);
      }
      if (shift > 30) {
        throw new Error(`polyline delta overflow at index ${i - 1}`);
      }
      result |= (byte & 0x1f) << shift;
      shift += 5;
    } while (byte >= 0x20);
    return result & 1 ? ~(result >> 1) : result >> 1;
  };

  while (i < encoded.length) {
    lat += nextDelta();
    lng += nextDelta();
    points.push({ lat: lat / 1e5, lng: lng / 1e5 });
  }
  return points;
}

/** Parse a "lat,lng" text field. Returns null when the text is not a valid pair. */
export function parseLatLng(text: string): LatLng | null {
  const match = /^\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*$/.exec(text);
  if (!match) return null;
  const lat = Number(match[1]);
  const lng = Number(match[2]);
  if (!Number.isFinite(lat) || !Number.isFinite(lng)) return null;
  if (Math.abs(lat) > 90 || Math.abs(lng) > 180) return null;
  return { lat, lng };
}
