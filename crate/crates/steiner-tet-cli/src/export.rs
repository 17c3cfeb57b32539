//! Tree geometry export: a line-element OBJ mesh or a flat per-edge CSV.
//! Numbers use the shortest round-trip decimal form, so identical inputs
//! produce byte-identical files.

use steiner_tet::SteinerTree;

use crate::CliError;

/// OBJ with the six points (A1..A4, O12, O34, in that order) as `v` records
/// and the five tree edges as `l` records.
pub fn export_obj(tree: &SteinerTree) -> String {
    let mut out = String::from("o steiner_tree\n");
    // Vertex order: terminals then nodes; edges reference 1-based indices.
    let index = |name: &str| match name {
        "A1" => 1,
        "A2" => 2,
        "A3" => 3,
        "A4" => 4,
        "O12" => 5,
        "O34" => 6,
        _ => unreachable!("unknown tree vertex {name}"),
    };
    let mut verts = [None; 6];
    for e in &tree.edges {
        verts[index(e.from) - 1] = Some(e.from_point);
        verts[index(e.to) - 1] = Some(e.to_point);
    }
    for v in verts {
        let v = v.expect("all six tree vertices present");
        out.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
    }
    for e in &tree.edges {
        out.push_str(&format!("l {} {}\n", index(e.from), index(e.to)));
    }
    out
}

pub const EDGE_CSV_HEADER: &str = "from,to,x1,y1,z1,x2,y2,z2,weight,length";

/// One row per tree edge: endpoint labels, coordinates, weight, length.
pub fn export_csv(tree: &SteinerTree) -> String {
    let mut out = String::from(EDGE_CSV_HEADER);
    out.push('\n');
    for e in &tree.edges {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            e.from,
            e.to,
            e.from_point.x,
            e.from_point.y,
            e.from_point.z,
            e.to_point.x,
            e.to_point.y,
            e.to_point.z,
            e.weight,
            e.length
        ));
    }
    out
}

/// Re-reads an exported edge CSV and returns the weighted cost, for
/// round-trip verification.
pub fn csv_cost(text: &str) -> Result<f64, CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::invalid("empty edge CSV".to_string()))?;
    if header != EDGE_CSV_HEADER {
        return Err(CliError::invalid(format!("unexpected edge CSV header: {header}")));
    }
    let mut cost = 0.0;
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(CliError::invalid(format!("bad edge CSV row: {line}")));
        }
        let weight: f64 = fields[8]
            .parse()
            .map_err(|e| CliError::invalid(format!("bad weight in edge CSV: {e}")))?;
        let length: f64 = fields[9]
            .parse()
            .map_err(|e| CliError::invalid(format!("bad length in edge CSV: {e}")))?;
        cost += weight * length;
    }
    Ok(cost)
}
