//! Scan grids: `key=start:stop:count` axes and their cross product.

/// Evenly spaced values, endpoints included.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub key: String,
    pub values: Vec<f64>,
}

/// Parses `key=start:stop:count`.
pub fn parse_axis(text: &str) -> Result<Axis, String> {
    let (key, range) = text
        .split_once('=')
        .ok_or_else(|| format!("grid '{text}' must look like key=start:stop:count"))?;
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(format!("grid '{text}' must look like key=start:stop:count"));
    };
    let start: f64 = start.trim().parse().map_err(|_| format!("bad grid start in '{text}'"))?;
    let stop: f64 = stop.trim().parse().map_err(|_| format!("bad grid stop in '{text}'"))?;
    let count: usize = count.trim().parse().map_err(|_| format!("bad grid count in '{text}'"))?;
    if !start.is_finite() || !stop.is_finite() || count == 0 {
        return Err(format!("grid '{text}' needs finite bounds and a positive count"));
    }
    if count == 1 && start != stop {
        return Err(format!("grid '{text}' has one point but distinct bounds"));
    }
    let values = (0..count)
        .map(|i| {
            if i + 1 == count {
                stop
            } else {
                start + (stop - start) * i as f64 / (count - 1) as f64
            }
        })
        .collect();
    Ok(Axis {
        key: key.trim().to_string(),
        values,
    })
}

/// Every combination of axis values; the first axis varies slowest.
pub fn cross_product(axes: &[Axis]) -> Vec<Vec<(String, f64)>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut point = prefix.clone();
                    point.push((axis.key.clone(), v));
                    point
                })
            })
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_values() {
        let a = parse_axis("s=2.5:4:4").unwrap();
        assert_eq!(a.key, "s");
        assert_eq!(a.values, vec![2.5, 3.0, 3.5, 4.0]);
        assert_eq!(parse_axis("q=0.5:0.5:1").unwrap().values, vec![0.5]);
        for bad in ["s=1:2", "s1:2:3", "s=1:2:0", "s=1:2:1", "s=a:2:3"] {
            assert!(parse_axis(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn product_order() {
        let axes = [parse_axis("a=0:1:2").unwrap(), parse_axis("b=5:7:3").unwrap()];
        let pts = cross_product(&axes);
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![("a".into(), 0.0), ("b".into(), 5.0)]);
        assert_eq!(pts[1], vec![("a".into(), 0.0), ("b".into(), 6.0)]);
        assert_eq!(pts[5], vec![("a".into(), 1.0), ("b".into(), 7.0)]);
        assert_eq!(cross_product(&[]), vec![Vec::<(String, f64)>::new()]);
    }
}
