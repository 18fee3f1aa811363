use anyhow::Result;
use hilbertlab_core::norms::reference_constants;

use crate::args::ConstantsArgs;
use crate::output::{num, short, RunRecord, Table};

pub const HEADER: [&str; 5] = ["p", "p_star", "pichorides", "beta_hilbert", "wds_bound"];

pub fn run(a: &ConstantsArgs) -> Result<RunRecord> {
    let c = reference_constants(a.p)?;
    let mut table = Table::new(&HEADER);
    table.push(vec![num(a.p), num(c.p_star), num(c.pichorides), num(c.beta_hilbert), num(c.wds_bound_hilbert)]);
    let mut rec = RunRecord::new("constants", table);
    rec.stdout = Some(format!(
        "p*={}\npichorides={}\nbeta_hilbert={}\nwds_bound={}\n",
        short(c.p_star),
        short(c.pichorides),
        short(c.beta_hilbert),
        short(c.wds_bound_hilbert)
    ));
    rec.set("p", a.p);
    Ok(rec)
}
